import pytest

from realstab.exceptions import DimensionError, NotStableError
from realstab.param import iop_from_controller
from realstab.ratcore import RationalFunction
from realstab.robust import iop_nominal_robust_check, robust_iop_margin
from realstab.tfmat import TransferMatrix, tm_hinf_norm


@pytest.fixture
def quad(lag):
    return iop_from_controller(lag, 0.3)


def test_norm_of_control_map(quad):
    assert tm_hinf_norm(quad.U) == pytest.approx(0.75, rel=1e-6)


@pytest.mark.parametrize('delta_G,stable', [(0.2, True), (-1.2, True), (1.5, False)])
def test_plant_perturbation(quad, delta_G, stable):
    report = iop_nominal_robust_check(quad, delta_G, cross_check=True)
    assert report.stable == stable
    assert report.details['cross_check'] == stable


def test_unstable_perturbation_rejected(quad):
    with pytest.raises(NotStableError):
        iop_nominal_robust_check(quad, RationalFunction([1.], [-1.1, 1.]))


def test_perturbation_shape(quad):
    with pytest.raises(DimensionError):
        iop_nominal_robust_check(quad, TransferMatrix.zeros(2, 1))


@pytest.mark.parametrize('epsilon,inside', [(0., True), (1.3, True), (1.34, False)])
def test_margin(quad, epsilon, inside):
    assert robust_iop_margin(quad, epsilon) == inside


def test_margin_spot_checks(quad, caplog):
    assert robust_iop_margin(quad, 1.3, spot_checks=10)
    assert 'destabilized' not in caplog.text


def test_negative_epsilon(quad):
    with pytest.raises(ValueError):
        robust_iop_margin(quad, -1.)
