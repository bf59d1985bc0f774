import pytest

from realstab.exceptions import DimensionError, NotStableError
from realstab.ratcore import RationalFunction
from realstab.robust import youla_dual_check
from realstab.tfmat import TransferMatrix


def dual(c):
    return RationalFunction([c], [-0.5, 1.])


@pytest.mark.parametrize('c', [-5.5, -4.9, -1., 0.5, 1.6, 2.])
def test_pole_moves_with_gain(c):
    report = youla_dual_check(dual(c), 0.3)
    stable = abs(0.5 + 0.3 * c) < 1
    assert report.stable == stable
    assert report.details['block_stable'] == stable
    assert report.details['identity_residual'] < 1e-10


def test_unstable_witness():
    report = youla_dual_check(dual(2.), 0.3)
    assert not report.stable
    assert [complex(p) for p in report.witness] == [pytest.approx(1.1)]


def test_parameters_must_be_stable():
    with pytest.raises(NotStableError):
        youla_dual_check(RationalFunction([1.], [-1.5, 1.]), 0.3)


def test_shapes():
    with pytest.raises(DimensionError):
        youla_dual_check(TransferMatrix.zeros(2, 1), TransferMatrix.zeros(2, 1))
