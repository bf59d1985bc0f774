import numpy as np
import pytest

from realstab.param import StateSpacePlant, dcf


@pytest.fixture
def lag_plant():
    """G = 1/(z - 0.5)"""
    return StateSpacePlant(0.5, 1., 1.)


@pytest.fixture
def unstable_plant():
    """G = 1/(z - 2)"""
    return StateSpacePlant(2., 1., 1.)


@pytest.fixture
def two_state_plant():
    return StateSpacePlant(np.array([[1.1, 0.4], [0., 0.6]]), np.array([[0.], [1.]]), np.array([[1., 0.]]))


@pytest.fixture(params=['lag_plant', 'unstable_plant', 'two_state_plant'])
def plant(request):
    return request.getfixturevalue(request.param)


@pytest.fixture
def factors(plant):
    return dcf(plant)
