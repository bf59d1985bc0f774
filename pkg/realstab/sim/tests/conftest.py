import numpy as np
import pytest

from realstab.param import sls_sf_synthesize
from realstab.ratcore import RationalFunction
from realstab.realization import plant_controller_realization


@pytest.fixture
def loop():
    """y = u/(z - 0.5) + d_y, u = 0.3 y + d_u"""
    return plant_controller_realization(RationalFunction([1.], [-0.5, 1.]), 0.3)


@pytest.fixture
def plant():
    return np.array([[0.5, 0.2], [0., 0.3]]), np.array([[0.], [1.]])


@pytest.fixture
def phi(plant):
    A, B = plant
    return sls_sf_synthesize(A, B, 6)
