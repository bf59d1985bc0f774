import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from realstab.exceptions import InfeasibleError, NotStableError
from realstab.param import (StateSpacePlant, dcf, youla_controller, sls_sf_synthesize, sls_sf_controller,
                            sls_sf_from_controller, sls_of_from_controller, sls_of_controller)
from realstab.ratcore import RationalFunction
from realstab.realization import check_internal, state_feedback_realization
from realstab.tfmat import TransferMatrix
from realstab.param.tests.strategies import state_matrices, stabilized_plants
from realstab.utilities import point_residual

Z_INV = RationalFunction([1.], [0., 1.])


def test_integrator_is_deadbeat():
    phi = sls_sf_synthesize(1., 1., 1)
    assert point_residual(phi.phi_x, Z_INV) < 1e-12
    assert point_residual(phi.phi_u, -1. * Z_INV) < 1e-12
    K = sls_sf_controller(phi)
    assert point_residual(K, -1.) < 1e-12
    assert check_internal(state_feedback_realization(1., 1., K)).internally_stable


def test_fir_responses_are_feasible():
    phi = sls_sf_synthesize(0.5, 1., 10)
    assert phi.affine_residual() < 1e-10
    assert phi.strictly_proper_stable
    assert phi.metadata == {'objective': 'fir-h2', 'horizon': 10}
    x, u = phi.taps
    assert x.horizon == u.horizon == 10
    assert np.allclose(x[1], 1.) and np.allclose(x[0], 0.)


@pytest.mark.slow
@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=-1.5, max_value=1.5), st.floats(min_value=0.3, max_value=2.), st.integers(1, 8))
def test_scalar_synthesis(a, b, horizon):
    phi = sls_sf_synthesize(a, b, horizon)
    assert phi.affine_residual() < 1e-8
    assert phi.strictly_proper_stable


def test_two_state_synthesis():
    A = np.array([[1.1, 0.4], [0., 0.6]])
    B = np.array([[0.], [1.]])
    phi = sls_sf_synthesize(A, B, 6)
    assert phi.affine_residual() < 1e-9
    assert phi.stacked.shape == (3, 2)


def test_short_horizon_is_infeasible():
    # one input cannot zero two states in one step
    A = np.array([[1.1, 0.4], [0., 0.6]])
    with pytest.raises(InfeasibleError):
        sls_sf_synthesize(A, np.array([[0.], [1.]]), 1)


def test_uncontrollable_is_infeasible():
    with pytest.raises(InfeasibleError):
        sls_sf_synthesize(2., 0., 5)


def test_horizon_must_be_positive():
    with pytest.raises(ValueError):
        sls_sf_synthesize(0.5, 1., 0)


def test_truncation_loses_feasibility():
    phi = sls_sf_synthesize(0.9, 1., 8).truncate(3)
    assert phi.horizon == 3
    assert phi.metadata['truncated_from'] == 8
    with pytest.raises(ValueError):
        sls_sf_from_controller(0.5, 1., -0.5).truncate(2)


def test_responses_of_deadbeat_loop():
    phi = sls_sf_from_controller(0.5, 1., -0.5)
    assert point_residual(phi.phi_x, Z_INV) < 1e-12
    assert point_residual(phi.phi_u, -0.5 * Z_INV) < 1e-12
    assert phi.affine_residual() < 1e-12
    assert point_residual(sls_sf_controller(phi), -0.5) < 1e-12


def test_responses_of_unstable_loop():
    with pytest.raises(NotStableError):
        sls_sf_from_controller(2., 1., 0.)


@pytest.mark.parametrize('D', [None, 0.4])
def test_output_feedback_round_trip(D):
    plant = StateSpacePlant(0.5, 1., 1., D)
    p = sls_of_from_controller(plant, 0.3)
    assert max(p.identity_residuals()) < 1e-10
    assert p.properness_ok
    assert point_residual(sls_of_controller(p), 0.3) < 1e-9


def test_output_feedback_of_unstable_plant(two_state_plant):
    K = RationalFunction([0.], [1.])
    with pytest.raises(NotStableError):
        sls_of_from_controller(two_state_plant, K)


@pytest.mark.slow
@settings(max_examples=50, deadline=None)
@given(stabilized_plants())
def test_random_output_feedback_round_trip(case):
    plant, _, _, K = case
    p = sls_of_from_controller(plant, K)
    assert max(p.identity_residuals()) < 1e-8
    assert p.properness_ok
    assert point_residual(sls_of_controller(p), K) < 1e-6


@pytest.mark.parametrize('D', [0., 0.3])
def test_output_feedback_round_trip_through_unstable_state(D):
    plant = StateSpacePlant(np.array([[1.02405, 0.3], [0., -0.77156577]]), np.array([[0.5], [1.]]),
                            np.array([[1., 0.4]]), D)
    K = youla_controller(dcf(plant), TransferMatrix([[RationalFunction([0.2], [-0.4, 1.])]]))
    recovered = sls_of_controller(sls_of_from_controller(plant, K))
    assert point_residual(recovered, K) < 1e-6
    assert recovered[0, 0].den.degree <= K[0, 0].den.degree


@pytest.mark.slow
@settings(max_examples=30, deadline=None)
@given(state_matrices())
def test_random_fir_synthesis(AB):
    A, B = AB
    horizon = 2 * A.shape[0]
    phi = sls_sf_synthesize(A, B, horizon)
    assert phi.affine_residual() < 1e-10
    assert phi.strictly_proper_stable
    x, u = phi.taps
    assert np.allclose(x[1], np.eye(A.shape[0]))
    assert np.allclose(A @ x[horizon] + B @ u[horizon], 0., atol=1e-10)
    assert check_internal(state_feedback_realization(A, B, sls_sf_controller(phi))).internally_stable
