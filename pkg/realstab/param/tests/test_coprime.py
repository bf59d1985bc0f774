import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from realstab.exceptions import DimensionError
from realstab.param import StateSpacePlant, dcf


def test_bezout_identity(factors):
    assert factors.bezout_residual() < 1e-8
    assert factors.plant_residual() < 1e-8


def test_factors_are_stable(factors):
    assert factors.all_stable


def test_explicit_gains(unstable_plant):
    cf = dcf(unstable_plant, F=[[-1.5]], L=[[-1.8]])
    assert cf.bezout_residual() < 1e-10
    assert cf.all_stable
    assert np.allclose(cf.F, [[-1.5]])


def test_gain_shapes(two_state_plant):
    with pytest.raises(DimensionError):
        dcf(two_state_plant, F=np.zeros((2, 2)))


def test_feedthrough_plant():
    plant = StateSpacePlant(0.5, 1., 1., 0.4)
    cf = dcf(plant)
    assert cf.bezout_residual() < 1e-8
    assert cf.plant_residual() < 1e-8


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-2, max_value=2), st.floats(min_value=0.2, max_value=2), st.floats(min_value=0.2, max_value=2))
def test_scalar_plants(a, b, c):
    cf = dcf(StateSpacePlant(a, b, c))
    assert cf.bezout_residual() < 1e-8
    assert cf.all_stable
