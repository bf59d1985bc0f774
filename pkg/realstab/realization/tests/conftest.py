import pytest

from realstab.ratcore import RationalFunction
from realstab.realization import plant_controller_realization, state_feedback_realization


@pytest.fixture
def lag():
    """1/(z - 0.5)"""
    return RationalFunction([1.], [-0.5, 1.])


@pytest.fixture
def loop(lag):
    """y = u/(z - 0.5) + d_y, u = 0.3 y + d_u"""
    return plant_controller_realization(lag, 0.3)


@pytest.fixture
def deadbeat():
    """x+ = 0.5 x + u, u = -0.5 x"""
    return state_feedback_realization(0.5, 1., -0.5)
