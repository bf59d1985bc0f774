import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from realstab.exceptions import DimensionError, IllPosedError
from realstab.ratcore import RationalFunction
from realstab.param.tests.strategies import stabilized_plants
from realstab.realization import Realization, check_internal, plant_controller_realization, stability_of
from realstab.robust import (Perturbation, perturbed_stability, perturbation_residuals, robust_check,
                             small_gain_margin, structured_margins)
from realstab.tfmat import TransferMatrix

LAG = RationalFunction([1.], [-0.5, 1.])


def gain_change(space, epsilon):
    return Perturbation.from_blocks(space, {('u', 'y'): epsilon})


def test_margin_of_controller_gain(S_hat, loop):
    idx = loop.space.indices
    assert small_gain_margin(S_hat.take(idx('y'), idx('u'))) == pytest.approx(0.2, rel=1e-6)


@pytest.mark.parametrize('epsilon,stable', [(0.1, True), (-0.5, True), (0.3, False), (-1.9, False)])
def test_gain_change(S_hat, loop, epsilon, stable):
    report = robust_check(S_hat, gain_change(loop.space, epsilon))
    assert report.stable == stable
    assert report.verdict == ('stable' if stable else 'unstable')
    if not stable:
        assert np.allclose(np.abs(report.witness), abs(0.8 + epsilon))


@pytest.mark.parametrize('fraction,stable', [(0.99, True), (1.01, False)])
def test_boundary_flip(S_hat, loop, fraction, stable):
    idx = loop.space.indices
    margin = small_gain_margin(S_hat.take(idx('y'), idx('u')))
    assert robust_check(S_hat, gain_change(loop.space, fraction * margin)).stable == stable


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-1.7, max_value=0.19))
def test_matches_direct_inverse(epsilon):
    loop = plant_controller_realization(LAG, 0.3)
    S_hat = stability_of(loop)
    delta = gain_change(loop.space, epsilon)
    residuals = perturbation_residuals(S_hat, delta, R_hat=loop)
    assert residuals['mirrored'] < 1e-8
    assert residuals['direct'] < 1e-8


def test_ill_posed_loop():
    r = plant_controller_realization(0.5, 0.)
    S_hat = stability_of(r)
    delta = gain_change(r.space, 2.)
    report = robust_check(S_hat, delta)
    assert not report.well_posed
    assert report.verdict == 'ill-posed'
    with pytest.raises(IllPosedError):
        perturbed_stability(S_hat, delta)


def test_zero_perturbation(S_hat, loop):
    assert perturbed_stability(S_hat, Perturbation.zero(loop.space)) is S_hat


def test_shape(S_hat):
    with pytest.raises(DimensionError):
        robust_check(S_hat, TransferMatrix.zeros(3, 3))


def test_cross_check_logs_nothing_when_consistent(S_hat, loop, caplog):
    perturbed_stability(S_hat, gain_change(loop.space, 0.1), cross_check=True, R_hat=loop)
    assert 'disagrees' not in caplog.text


def test_zero_block_has_infinite_margin():
    assert small_gain_margin(TransferMatrix.zeros(1, 1)) == np.inf


def test_structured_margins(S_hat, loop):
    margins = structured_margins(S_hat, loop.space, [('u', 'y'), ('y', 'u')])
    assert margins.per_block[('u', 'y')] == pytest.approx(0.2, rel=1e-6)
    assert margins.joint <= min(margins.per_block.values()) / 2 + 1e-12
    with pytest.raises(ValueError):
        structured_margins(S_hat, loop.space, [])


def _perturbable(plant, cf, K):
    """The three realizations of one stabilized plant with the controller block each one perturbs"""
    return [(plant_controller_realization(plant.G, K), ('u', 'y')),
            (plant.output_feedback(K), ('u', 'y')),
            (plant.state_feedback(cf.F), ('u', 'x'))]


@pytest.mark.slow
@settings(max_examples=50, deadline=None)
@given(stabilized_plants(), st.floats(min_value=-0.6, max_value=0.6), st.integers(min_value=0, max_value=2))
def test_structured_perturbations_match_direct_inverse(case, epsilon, which):
    plant, cf, _, K = case
    r, (a, b) = _perturbable(plant, cf, K)[which]
    delta = Perturbation.from_blocks(r.space, {(a, b): np.full((r.space.dim(a), r.space.dim(b)), epsilon)})
    S_hat = stability_of(r)
    report = robust_check(S_hat, delta)
    direct = check_internal(Realization(r.space, r.R + delta.delta))
    assert report.stable == direct.internally_stable
    if report.stable:
        assert perturbation_residuals(S_hat, delta, R_hat=r)['direct'] < 1e-8
