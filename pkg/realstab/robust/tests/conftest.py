import pytest

from realstab.ratcore import RationalFunction
from realstab.realization import plant_controller_realization, stability_of


@pytest.fixture
def lag():
    """1/(z - 0.5)"""
    return RationalFunction([1.], [-0.5, 1.])


@pytest.fixture
def loop(lag):
    """y = u/(z - 0.5) + d_y, u = 0.3 y + d_u; closed-loop pole 0.8"""
    return plant_controller_realization(lag, 0.3)


@pytest.fixture
def S_hat(loop):
    return stability_of(loop)
