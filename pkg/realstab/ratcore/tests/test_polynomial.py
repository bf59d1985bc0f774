import numpy as np
import pytest
from hypothesis import given, example, settings

from realstab.context import Tolerances
from realstab.exceptions import RootFindingError
from realstab.ratcore import Polynomial, poly_roots, ZERO_DEGREE
from realstab.ratcore.polynomial import fujiwara_bound, _backward_error
from realstab.ratcore.tests.strategies import polynomials


def test_trailing_coefficients_are_stripped():
    p = Polynomial([1., 2., 0., 1e-13])
    assert p.degree == 1
    assert p.to_list() == [1., 2.]


def test_zero_polynomial_has_no_coefficients():
    p = Polynomial([0., 0.])
    assert p.is_zero
    assert p.degree == ZERO_DEGREE
    assert len(p.coeffs) == 0


def test_drop_tolerance_follows_context():
    with Tolerances(drop_tol=1e-3):
        assert Polynomial([1., 1e-4]).degree == 0
    assert Polynomial([1., 1e-4]).degree == 1


@pytest.mark.parametrize('coeffs,expected', [
    ([-1., 1.], [1.]),
    ([0., 0., 1.], [0., 0.]),
    ([0.25, -1.25, 1.], [0.25, 1.]),
])
def test_roots_of_small_polynomials(coeffs, expected):
    roots = poly_roots(Polynomial(coeffs))
    assert np.allclose(np.sort(roots.real), expected, atol=1e-9)
    assert np.allclose(roots.imag, 0, atol=1e-9)


def test_roots_of_zero_polynomial_are_undefined():
    with pytest.raises(RootFindingError, match='roots of zero polynomial undefined'):
        poly_roots(Polynomial())


def test_constant_has_no_roots():
    assert len(poly_roots(Polynomial([3.]))) == 0


def test_complex_roots_come_in_conjugate_pairs():
    roots = poly_roots(Polynomial([0.25, 0., 1.]))
    assert np.allclose(np.sort_complex(roots), [-0.5j, 0.5j], atol=1e-9)


def test_repeated_roots():
    p = Polynomial.from_roots([0.5, 0.5, 0.5])
    roots = poly_roots(p)
    assert len(roots) == 3
    assert np.allclose(roots, 0.5, atol=1e-3)


@settings(max_examples=50, deadline=None)
@given(polynomials())
@example(Polynomial([1., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 1.]))
@example(Polynomial([-1., 1.]))
def test_roots_rebuild_the_polynomial(p):
    roots = poly_roots(p)
    assert len(roots) == p.degree
    rebuilt = Polynomial.from_roots(roots, p.leading)
    assert np.allclose(rebuilt.coeffs, p.coeffs, atol=1e-6)


def test_polynomial_arithmetic():
    a, b = Polynomial([-1., 1.]), Polynomial([1., 1.])
    assert (a * b) == Polynomial([-1., 0., 1.])
    assert (a + b) == Polynomial([0., 2.])
    assert (a - a).is_zero
    assert (2 * a) == Polynomial([-2., 2.])


def test_division_with_remainder():
    q, r = divmod(Polynomial([-1., 0., 1.]), Polynomial([-1., 1.]))
    assert q.allclose([1., 1.])
    assert r.is_zero


def test_derivative_and_evaluation():
    p = Polynomial([0., 0., 0., 1.])
    assert p.derivative() == Polynomial([0., 0., 3.])
    assert np.allclose(p(np.array([1., 2., 1j])), [1., 8., -1j])


def test_powers_of_z_factor_out():
    p = Polynomial([0., 0., 2., 1.])
    assert p.low_order_zeros() == 2
    assert p.shift(-2) == Polynomial([2., 1.])
    assert p.shift(1) == Polynomial([0., 0., 0., 2., 1.])


@settings(max_examples=50, deadline=None)
@given(polynomials())
def test_fujiwara_bound_covers_every_root(p):
    monic = p.coeffs / p.leading
    assert np.max(np.abs(np.roots(monic[::-1]))) <= fujiwara_bound(monic) * (1 + 1e-9)


def _ring_polynomial(degree, seed):
    """Monic, roots on moduli 1.1 to 1.43"""
    rng = np.random.default_rng(seed)
    moduli = rng.uniform(1.1, 1.43, degree // 2)
    angles = rng.uniform(0.1, np.pi - 0.1, degree // 2)
    roots = np.concatenate([moduli * np.exp(1j * angles), moduli * np.exp(-1j * angles)])
    return Polynomial.from_roots(roots), roots


@pytest.mark.parametrize('seed', range(5))
def test_roots_of_high_degree_polynomial_with_large_coefficients(seed):
    p, expected = _ring_polynomial(42, seed)
    assert np.max(np.abs(p.coeffs)) > 1e3
    roots = poly_roots(p)
    assert len(roots) == 42
    assert np.max(np.abs(roots)) < 1.5
    assert _backward_error(p.coeffs, roots).max() < 1e-10
    assert np.max(np.abs(roots)) == pytest.approx(np.max(np.abs(expected)), abs=1e-3)


def test_backward_error_does_not_overflow():
    monic = np.zeros(61)
    monic[[0, -1]] = [-1., 1.]
    far = np.array([1e8 + 0j, -1e8j])
    errors = _backward_error(monic, far)
    assert np.all(np.isfinite(errors))
    assert np.all(errors > 0.99)
    assert _backward_error(monic, np.exp(2j * np.pi * np.arange(60) / 60)).max() < 1e-12
