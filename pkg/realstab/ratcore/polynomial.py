import math
from numbers import Number
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as P

from ..context import current_tolerances
from ..exceptions import RootFindingError

__all__ = ['Polynomial', 'poly_roots', 'ZERO_DEGREE']

ZERO_DEGREE = -math.inf
# roots with a relative imaginary part below this are treated as real
REAL_SNAP = 1e-10


class Polynomial:
    """
    Real-coefficient polynomial in z with coefficients in ascending powers.
    Trailing coefficients at or below `drop_tol` are stripped, so the zero
    polynomial has no coefficients and degree `ZERO_DEGREE`.
    """
    __slots__ = ('_coeffs',)

    def __init__(self, coeffs=(), drop_tol: float = None):
        c = np.array(np.atleast_1d(coeffs), dtype=float).ravel()
        tol = current_tolerances().drop_tol if drop_tol is None else drop_tol
        keep = np.flatnonzero(np.abs(c) > tol)
        c = c[:keep[-1] + 1] if keep.size else c[:0]
        c.setflags(write=False)
        self._coeffs = c

    @classmethod
    def coerce(cls, x) -> 'Polynomial':
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, Number):
            if isinstance(x, complex):
                raise TypeError(f"Polynomials have real coefficients, got {x}")
            return cls([x])
        return cls(x)

    @classmethod
    def from_roots(cls, roots, leading: float = 1.) -> 'Polynomial':
        """Real polynomial leading * prod(z - r); `roots` must be closed under conjugation"""
        roots = np.asarray(roots, dtype=complex)
        if roots.size == 0:
            return cls([leading])
        return cls(np.real(P.polyfromroots(roots)) * leading)

    @classmethod
    def monomial(cls, k: int, coefficient: float = 1.) -> 'Polynomial':
        c = np.zeros(k + 1)
        c[k] = coefficient
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> Union[int, float]:
        return len(self._coeffs) - 1 if len(self._coeffs) else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return len(self._coeffs) == 0

    @property
    def leading(self) -> float:
        if self.is_zero:
            return 0.
        return float(self._coeffs[-1])

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self._coeffs))) if len(self._coeffs) else 0.

    @property
    def is_monomial(self) -> bool:
        return not self.is_zero and not np.any(self._coeffs[:-1])

    def low_order_zeros(self, rel_tol: float = 0.) -> int:
        """
        Number of lowest-order coefficients that count as zero, i.e. the power of z that
        factors out. Coefficients at or below rel_tol * scale count as zero.
        """
        if self.is_zero:
            return 0
        small = np.abs(self._coeffs[:-1]) <= rel_tol * self.scale
        k = 0
        while k < len(small) and small[k]:
            k += 1
        return k

    def shift(self, k: int) -> 'Polynomial':
        """Multiply by z**k; a negative k drops the k lowest coefficients"""
        if self.is_zero or k == 0:
            return self
        if k > 0:
            return Polynomial(np.concatenate([np.zeros(k), self._coeffs]))
        return Polynomial(self._coeffs[-k:])

    def __call__(self, z):
        if self.is_zero:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return np.polyval(self._coeffs[::-1], z)

    def _combine(self, other, sign) -> 'Polynomial':
        other = Polynomial.coerce(other)
        a, b = self._coeffs, other._coeffs
        n = max(len(a), len(b))
        s = np.zeros(n)
        s[:len(a)] += a
        s[:len(b)] += sign * b
        # cancellation noise relative to the operands is not a coefficient
        scale = max(self.scale, other.scale)
        s[np.abs(s) <= current_tolerances().drop_tol * scale] = 0.
        return Polynomial(s)

    def __add__(self, other):
        return self._combine(other, 1.)

    def __radd__(self, other):
        return self._combine(other, 1.)

    def __sub__(self, other):
        return self._combine(other, -1.)

    def __rsub__(self, other):
        return Polynomial.coerce(other)._combine(self, -1.)

    def __neg__(self):
        return Polynomial(-self._coeffs)

    def __mul__(self, other):
        if isinstance(other, Number):
            return Polynomial(self._coeffs * float(other))
        other = Polynomial.coerce(other)
        if self.is_zero or other.is_zero:
            return Polynomial()
        return Polynomial(np.convolve(self._coeffs, other._coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Number):
            raise TypeError("Polynomials can only be divided by scalars; use divmod for polynomial division")
        return Polynomial(self._coeffs / float(other))

    def __divmod__(self, other):
        other = Polynomial.coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero:
            return Polynomial(), Polynomial()
        q, r = P.polydiv(self._coeffs, other._coeffs)
        return Polynomial(q), Polynomial(r)

    def derivative(self) -> 'Polynomial':
        if self.degree < 1:
            return Polynomial()
        return Polynomial(P.polyder(self._coeffs))

    def roots(self) -> np.ndarray:
        return poly_roots(self)

    def allclose(self, other, rtol=1e-9, atol=1e-12) -> bool:
        other = Polynomial.coerce(other)
        if self.degree != other.degree:
            return False
        return bool(np.allclose(self._coeffs, other._coeffs, rtol=rtol, atol=atol))

    def __eq__(self, other):
        if not isinstance(other, (Polynomial, Number)):
            return NotImplemented
        return np.array_equal(self._coeffs, Polynomial.coerce(other)._coeffs)

    def __hash__(self):
        return hash(tuple(self._coeffs))

    def to_list(self):
        return [float(c) for c in self._coeffs]

    def __repr__(self):
        return f"Polynomial({self.to_list()})"


def _backward_error(monic: np.ndarray, z: np.ndarray) -> np.ndarray:
    """
    |p(z)| / sum_k |c_k| |z|^k. Points outside the unit circle are evaluated through the
    reversed polynomial at 1/z, so neither sum overflows.
    """
    z = np.asarray(z, dtype=complex)
    inside = np.abs(z) <= 1
    out = np.empty(z.shape)
    desc, absdesc = monic[::-1], np.abs(monic[::-1])
    with np.errstate(all='ignore'):
        zi = z[inside]
        out[inside] = np.abs(np.polyval(desc, zi)) / np.polyval(absdesc, np.abs(zi))
        w = 1 / z[~inside]
        out[~inside] = np.abs(np.polyval(monic, w)) / np.polyval(np.abs(monic), np.abs(w))
    return np.where(np.isfinite(out), out, np.inf)


def _newton_ratio(monic: np.ndarray, z: np.ndarray) -> np.ndarray:
    """p(z) / p'(z); outside the unit circle via q(w) = w^n p(1/w)"""
    n = len(monic) - 1
    desc = monic[::-1]
    ratio = np.empty(z.shape, dtype=complex)
    inside = np.abs(z) <= 1
    with np.errstate(all='ignore'):
        zi = z[inside]
        ratio[inside] = np.polyval(desc, zi) / np.polyval(np.polyder(desc), zi)
        zo = z[~inside]
        w = 1 / zo
        q, dq = np.polyval(monic, w), np.polyval(np.polyder(monic), w)
        ratio[~inside] = zo * q / (n * q - w * dq)
    return ratio


def fujiwara_bound(monic: np.ndarray) -> float:
    """Upper bound on the root moduli of a monic polynomial given in ascending powers"""
    n = len(monic) - 1
    a = np.abs(monic[:-1][::-1])  # a_{n-1}, ..., a_0
    a[-1] /= 2
    return float(2 * np.max(a ** (1. / np.arange(1, n + 1))))


def _aberth(monic: np.ndarray, root_tol: float, max_iter: int, start: np.ndarray = None) -> np.ndarray:
    """Aberth-Ehrlich simultaneous iteration on a monic polynomial with a non-zero constant term"""
    n = len(monic) - 1
    if n == 1:
        return np.array([-monic[0] + 0j])
    if start is None:
        radius = fujiwara_bound(monic) / 2
        z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    else:
        z = np.asarray(start, dtype=complex).copy()
    best, best_res = z, _backward_error(monic, z).max()
    settled = 0
    for _ in range(max_iter):
        with np.errstate(all='ignore'):
            ratio = _newton_ratio(monic, z)
            inv = 1 / (z[:, None] - z[None, :])
            np.fill_diagonal(inv, 0)
            w = ratio / (1 - ratio * inv.sum(axis=1))
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        res = _backward_error(monic, z).max()
        if res < best_res:
            best, best_res = z, res
        if res < root_tol:
            settled += 1
            step = np.max(np.abs(w) / (1 + np.abs(z)))
            if step < 1e-15 or settled >= 3:
                break
    if not best_res < root_tol:
        raise RootFindingError(f"root finding did not converge after {max_iter} iterations "
                               f"(backward error {best_res:.3g})", best=best, residual=float(best_res))
    return best


def _find_roots(monic: np.ndarray, root_tol: float, max_iter: int) -> np.ndarray:
    try:
        return _aberth(monic, root_tol, max_iter)
    except RootFindingError as e:
        first = e
    # reseed from the companion matrix eigenvalues
    seed = np.roots(monic[::-1]).astype(complex)
    if _backward_error(monic, seed).max() < root_tol:
        return seed
    try:
        return _aberth(monic, root_tol, max_iter, start=seed)
    except RootFindingError as e:
        raise e if e.details['residual'] < first.details['residual'] else first


def poly_roots(p: Polynomial) -> np.ndarray:
    """
    All roots of `p` with multiplicity, as a sorted complex array.
    Exact powers of z are factored out before the iteration.
    """
    if p.is_zero:
        raise RootFindingError("roots of zero polynomial undefined")
    if p.degree == 0:
        return np.empty(0, dtype=complex)
    tol = current_tolerances()
    k = p.low_order_zeros(tol.drop_tol)
    rest = p.coeffs[k:]
    found = np.empty(0, dtype=complex)
    if len(rest) > 1:
        found = _find_roots(rest / rest[-1], tol.root_tol, tol.max_iter)
        found = np.where(np.abs(found.imag) <= REAL_SNAP * (1 + np.abs(found)), found.real + 0j, found)
    return np.sort_complex(np.concatenate([np.zeros(k, dtype=complex), found]))
