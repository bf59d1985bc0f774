import numpy as np
import pytest
from hypothesis import given, settings

from realstab.exceptions import DimensionError, HypothesisError
from realstab.param import sls_sf_controller, sls_sf_synthesize
from realstab.param.tests.strategies import state_matrices
from realstab.ratcore import RationalFunction
from realstab.realization import check_internal, state_feedback_realization
from realstab.sim import (simulate, impulse_disturbance, white_noise_disturbance, sls_original_realization,
                          sls_deployment_realization, sls_separated_realization, verify_separation)
from realstab.tfmat import TransferMatrix


def test_original_realization_is_stable(plant, phi):
    A, B = plant
    r = sls_original_realization(A, B, phi.phi_x, phi.phi_u)
    assert r.space.names == ['x', 'u', 'delta']
    assert check_internal(r).internally_stable


def test_deployment_matches_original(plant, phi):
    A, B = plant
    original = sls_original_realization(A, B, phi.phi_x, phi.phi_u)
    deployed = sls_deployment_realization(A, B, phi.phi_u)
    steps = 30
    d = {'x': white_noise_disturbance(original.space, steps, signals=['x'])[:, :2]}
    assert simulate(original, d, steps).max_deviation(simulate(deployed, d, steps), ['x', 'u']) < 1e-9


def test_three_diagrams_agree():
    phi = sls_sf_synthesize(0.5, 1., 1)
    plain = state_feedback_realization(0.5, 1., sls_sf_controller(phi))
    original = sls_original_realization(0.5, 1., phi.phi_x, phi.phi_u)
    deployed = sls_deployment_realization(0.5, 1., phi.phi_u)
    d = {'x': np.sin(np.arange(20.))}
    traces = [simulate(r, d, 20) for r in (plain, original, deployed)]
    for other in traces[1:]:
        assert traces[0].max_deviation(other, ['x', 'u']) < 1e-12


def test_deployment_realization_is_stable_for_stable_plant(plant, phi):
    A, B = plant
    assert check_internal(sls_deployment_realization(A, B, phi.phi_u)).internally_stable


def test_deployment_needs_stable_plant():
    phi = sls_sf_synthesize(1.5, 1., 4)
    report = check_internal(sls_deployment_realization(1.5, 1., phi.phi_u))
    assert not report.internally_stable
    assert np.allclose(np.abs(report.witness), 1.5)


def test_response_shapes(plant, phi):
    A, B = plant
    with pytest.raises(DimensionError):
        sls_original_realization(A, B, phi.phi_u, phi.phi_x)


def test_separation_of_exact_pair(phi):
    report = verify_separation(phi, phi.phi_x, phi.phi_u, certify=True)
    assert report.satisfied
    assert report.residual < 1e-9
    assert report.certified


@pytest.mark.parametrize('zero,certified', [(0.2, True), (1.5, False)])
def test_filtered_pairs(zero, certified):
    phi = sls_sf_synthesize(0.5, 1., 5)
    H = RationalFunction([-zero, 1.], [0., 1.])
    report = verify_separation(phi, phi.phi_x * H, phi.phi_u * H, certify=True)
    assert report.satisfied
    assert report.certified == certified


def test_separated_realization_matches_original():
    phi = sls_sf_synthesize(0.5, 1., 5)
    H = RationalFunction([-0.2, 1.], [0., 1.])
    separated = sls_separated_realization(0.5, 1., phi.phi_x * H, phi.phi_u * H)
    original = sls_original_realization(0.5, 1., phi.phi_x, phi.phi_u)
    d = impulse_disturbance(original.space, 'x', 25)
    assert simulate(separated, d).max_deviation(simulate(original, d), ['x', 'u']) < 1e-9


def test_corrupted_pair_fails():
    phi = sls_sf_synthesize(0.5, 1., 5)
    corrupted = phi.phi_u + TransferMatrix([[RationalFunction([1e-3], [0., 1.])]])
    report = verify_separation(phi, phi.phi_x, corrupted)
    assert not report.satisfied
    assert report.residual > 1e-4
    assert report.certified is None


def test_separation_needs_causal_pair(phi):
    improper = TransferMatrix.identity(2) * RationalFunction.z()
    with pytest.raises(HypothesisError):
        verify_separation(phi, improper, phi.phi_u)


@pytest.mark.slow
@settings(max_examples=10, deadline=None)
@given(state_matrices(radius=(0.2, 0.9)))
def test_three_diagrams_agree_on_random_stable_plants(AB):
    A, B = AB
    n = A.shape[0]
    phi = sls_sf_synthesize(A, B, 2 * n)
    plain = state_feedback_realization(A, B, sls_sf_controller(phi))
    original = sls_original_realization(A, B, phi.phi_x, phi.phi_u)
    deployed = sls_deployment_realization(A, B, phi.phi_u)
    steps = 30
    d = {'x': white_noise_disturbance(original.space, steps, signals=['x'])[:, :n]}
    traces = [simulate(r, d, steps) for r in (plain, original, deployed)]
    for other in traces[1:]:
        assert traces[0].max_deviation(other, ['x', 'u']) < 1e-9
