import logging
from collections import namedtuple
from numbers import Number
from typing import List, Tuple

import networkx as nx
import numpy as np

from .polynomial import Polynomial, poly_roots
from ..context import current_tolerances
from ..exceptions import RootFindingError, SingularError

__all__ = ['RationalFunction', 'Classification', 'rf_classify', 'rf_arith', 'rf_inverse', 'rf_cancel',
           'PROPER', 'STRICTLY_PROPER', 'IMPROPER']

PROPER, STRICTLY_PROPER, IMPROPER = 'proper', 'strictly_proper', 'improper'
CLUSTER_RADIUS = 1e-3
# a cluster is deflated when the quotient moves the value by at most this much, relative,
# on a circle of DEFLATION_DISTANCE * (1 + |centre|) around it
DEFLATION_TOL = 1e-6
DEFLATION_DISTANCE = 0.25
# a root is real for conjugate bookkeeping when its imaginary part is below this (relative)
REAL_TOL = 1e-9

Classification = namedtuple('Classification', ['properness', 'stable', 'poles'])


def _is_real(r: complex) -> bool:
    return abs(r.imag) <= REAL_TOL * (1 + abs(r))


def _clusters(roots: np.ndarray, radius: float) -> List[List[int]]:
    g = nx.Graph()
    g.add_nodes_from(range(len(roots)))
    close = np.argwhere(np.abs(roots[:, None] - roots[None, :]) <= radius)
    g.add_edges_from((int(i), int(j)) for i, j in close if i < j)
    return sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])


def _match_roots(rn: np.ndarray, rd: np.ndarray, tol: float):
    """
    Pair numerator roots with denominator roots: greedily within `tol`, then by cluster
    centroid for repeated roots that the root finder split apart.
    Returns (entries, clustered, left_n, left_d) with entries of (numerator root,
    denominator root, denominator index) and the unmatched roots of either side.
    """
    entries = []
    used_n, used_d = set(), set()
    if len(rn) and len(rd):
        dist = np.abs(rn[:, None] - rd[None, :])
        for flat in np.argsort(dist, axis=None, kind='stable'):
            i, j = divmod(int(flat), len(rd))
            if dist[i, j] > tol:
                break
            if i in used_n or j in used_d:
                continue
            used_n.add(i)
            used_d.add(j)
            entries.append((rn[i], rd[j], j))
    left_n = np.array([i for i in range(len(rn)) if i not in used_n], dtype=int)
    left_d = np.array([j for j in range(len(rd)) if j not in used_d], dtype=int)
    clustered = False
    if len(left_n) > 1 or len(left_d) > 1:
        cn = [(left_n[c], rn[left_n[c]].mean()) for c in _clusters(rn[left_n], CLUSTER_RADIUS)]
        cd = [(left_d[c], rd[left_d[c]].mean()) for c in _clusters(rd[left_d], CLUSTER_RADIUS)]
        taken = set()
        for members_n, centre_n in cn:
            for k, (members_d, centre_d) in enumerate(cd):
                if k in taken or abs(centre_n - centre_d) > tol or max(len(members_n), len(members_d)) < 2:
                    continue
                taken.add(k)
                clustered = True
                count = min(len(members_n), len(members_d))
                entries += [(centre_n, centre_d, None)] * count
                used_n.update(int(i) for i in members_n[:count])
                used_d.update(int(j) for j in members_d[:count])
                break
    rest_n = np.array([rn[i] for i in range(len(rn)) if i not in used_n], dtype=complex)
    rest_d = np.array([rd[j] for j in range(len(rd)) if j not in used_d], dtype=complex)
    return _conjugate_closed(entries, tol), clustered, rest_n, rest_d


def _conjugate_closed(entries, tol):
    """Keep only entries whose numerator and denominator roots form conjugate-closed sets"""
    kept, pending = [], []
    for e in entries:
        if _is_real(e[0]) and _is_real(e[1]):
            kept.append(e)
        else:
            pending.append(e)
    while pending:
        e = pending.pop(0)
        for k, f in enumerate(pending):
            if abs(f[0] - np.conj(e[0])) <= tol and abs(f[1] - np.conj(e[1])) <= tol:
                kept += [e, pending.pop(k)]
                break
    return kept


def _nearest(roots: np.ndarray, centre: complex, count: int) -> np.ndarray:
    return roots[np.argsort(np.abs(roots - centre), kind='stable')[:count]]


def _cluster_candidates(rn: np.ndarray, rd: np.ndarray):
    """
    Clusters of the pooled numerator and denominator roots that hold roots of both sides.
    Yields (numerator roots, denominator roots) of equal count, with the conjugate cluster
    folded in, once per conjugate pair.
    """
    pooled = np.concatenate([rn, rd])
    seen = set()
    for members in _clusters(pooled, CLUSTER_RADIUS):
        members = np.asarray(members)
        zn, zd = pooled[members[members < len(rn)]], pooled[members[members >= len(rn)]]
        count = min(len(zn), len(zd))
        if not count:
            continue
        centre = pooled[members].mean()
        key = (round(centre.real, 6), round(abs(centre.imag), 6))
        if key in seen:
            continue
        seen.add(key)
        zn, zd = _nearest(zn, zd.mean(), count), _nearest(zd, zn.mean(), count)
        if not _is_real(centre):
            zn, zd = np.concatenate([zn, np.conj(zn)]), np.concatenate([zd, np.conj(zd)])
        elif not (all(_is_real(r) for r in zn) and all(_is_real(r) for r in zd)):
            # real centre: split pairs are conjugate within the cluster
            zn, zd = _conjugate_fill(zn, pooled[members[members < len(rn)]]), \
                _conjugate_fill(zd, pooled[members[members >= len(rn)]])
            if len(zn) != len(zd):
                continue
        yield zn, zd


def _conjugate_fill(chosen: np.ndarray, pool: np.ndarray) -> np.ndarray:
    """`chosen` made conjugate-closed by pulling partners from `pool`"""
    out = [r for r in chosen]
    for r in chosen:
        if not _is_real(r) and not any(abs(s - np.conj(r)) <= CLUSTER_RADIUS * 1e-3 for s in out):
            partner = pool[np.argmin(np.abs(pool - np.conj(r)))]
            out.append(partner)
    return np.array(out, dtype=complex)


def _check_points(centre: complex) -> np.ndarray:
    offsets = np.exp(1j * np.array([0.3, 1.9, 3.5, 5.1]))
    return np.concatenate([centre + DEFLATION_DISTANCE * (1 + abs(centre)) * offsets, [2., 5j]])


def _deflate_verified(num: Polynomial, den: Polynomial, rn: np.ndarray, rd: np.ndarray):
    """
    Removes split repeated factors that root pairing misses. A cluster is divided out of
    both sides only when the quotient still agrees with num/den near the cluster.
    """
    removed = False
    for zn, zd in _cluster_candidates(rn, rd):
        qn, _ = divmod(num, Polynomial.from_roots(zn))
        qd, _ = divmod(den, Polynomial.from_roots(zd))
        if qd.is_zero or qn.is_zero:
            continue
        points = _check_points(zd.mean())
        with np.errstate(all='ignore'):
            before, after = num(points) / den(points), qn(points) / qd(points)
            gap = np.max(np.abs(before - after) / np.maximum(np.abs(before), np.abs(after)))
        if np.isfinite(gap) and gap <= DEFLATION_TOL:
            num, den, removed = qn, qd, True
    return num, den, removed


def _cancel(num: Polynomial, den: Polynomial, tol: float, den_roots=None):
    """
    Remove common factors of num and den. Returns (num, den, den_roots) where den_roots
    are the roots of the returned den when they are known without another root search.
    """
    if num.degree < 1 or den.degree < 1:
        return num, den, den_roots
    if den.is_monomial:
        k = min(num.low_order_zeros(), int(den.degree))
        return num.shift(-k), den.shift(-k), np.zeros(int(den.degree) - k, dtype=complex)
    k = min(num.low_order_zeros(current_tolerances().drop_tol), den.low_order_zeros(current_tolerances().drop_tol))
    if k:
        num, den = num.shift(-k), den.shift(-k)
        if den_roots is not None:
            den_roots = np.asarray(den_roots)[np.argsort(np.abs(den_roots), kind='stable')[k:]]
        if num.degree < 1 or den.degree < 1:
            return num, den, den_roots
    try:
        rn = poly_roots(num)
        rd = poly_roots(den) if den_roots is None else np.asarray(den_roots, dtype=complex)
    except RootFindingError as e:
        logging.warning(f"Skipping cancellation of {num}/{den}: {e}")
        return num, den, None
    entries, clustered, left_n, left_d = _match_roots(rn, rd, tol)
    remaining = rd
    if entries:
        num, _ = divmod(num, Polynomial.from_roots([e[0] for e in entries]))
        den, _ = divmod(den, Polynomial.from_roots([e[1] for e in entries]))
        remaining = None if clustered else np.delete(rd, [e[2] for e in entries])
    if len(left_n) and len(left_d) and num.degree >= 1 and den.degree >= 1:
        num, den, removed = _deflate_verified(num, den, left_n, left_d)
        if removed:
            remaining = None
    return num, den, remaining


class RationalFunction:
    """
    num(z) / den(z) with a monic denominator and, unless `cancel=False`,
    no numerator/denominator root pair closer than cancel_tol.
    """
    __slots__ = ('num', 'den', '_poles')

    def __init__(self, num=0., den=1., cancel: bool = True, cancel_tol: float = None, den_roots=None):
        num, den = Polynomial.coerce(num), Polynomial.coerce(den)
        if den.is_zero:
            raise SingularError("rational function with zero denominator")
        lead = den.leading
        if lead != 1.:
            num, den = num / lead, den / lead
        if num.is_zero:
            num, den, den_roots = Polynomial(), Polynomial([1.]), np.empty(0, dtype=complex)
        elif cancel:
            tol = current_tolerances().cancel_tol if cancel_tol is None else cancel_tol
            num, den, den_roots = _cancel(num, den, tol, den_roots)
            if den.leading != 1.:
                num, den = num / den.leading, den / den.leading
        self.num = num
        self.den = den
        self._poles = None if den_roots is None else np.sort_complex(np.asarray(den_roots, dtype=complex))

    @classmethod
    def coerce(cls, x) -> 'RationalFunction':
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Polynomial):
            return cls(x, 1., cancel=False)
        if isinstance(x, Number):
            return cls.constant(x)
        raise TypeError(f"Cannot interpret {x!r} as a rational function")

    @classmethod
    def constant(cls, c) -> 'RationalFunction':
        if isinstance(c, complex):
            raise TypeError(f"Rational functions have real coefficients, got {c}")
        return cls([float(c)], [1.], cancel=False)

    @classmethod
    def z(cls) -> 'RationalFunction':
        return cls([0., 1.], [1.], cancel=False)

    @classmethod
    def zero(cls) -> 'RationalFunction':
        return cls(0., 1., cancel=False)

    @property
    def poles(self) -> np.ndarray:
        if self._poles is None:
            self._poles = poly_roots(self.den)
        return self._poles

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    @property
    def relative_degree(self):
        return self.den.degree - self.num.degree

    @property
    def proper(self) -> bool:
        return self.num.degree <= self.den.degree

    @property
    def strictly_proper(self) -> bool:
        return self.num.degree < self.den.degree

    @property
    def feedthrough(self) -> float:
        """Value at infinity of a proper function"""
        if self.num.degree == self.den.degree:
            return self.num.leading
        if self.num.degree < self.den.degree:
            return 0.
        raise ValueError(f"{self} is improper and has no value at infinity")

    def classify(self) -> Classification:
        if self.num.degree > self.den.degree:
            properness = IMPROPER
        elif self.num.degree < self.den.degree:
            properness = STRICTLY_PROPER
        else:
            properness = PROPER
        poles = self.poles
        limit = 1 - current_tolerances().pole_tol
        stable = properness != IMPROPER and bool(np.all(np.abs(poles) < limit))
        return Classification(properness, stable, poles)

    @property
    def stable(self) -> bool:
        return self.classify().stable

    def __call__(self, z):
        return self.num(z) / self.den(z)

    evaluate = __call__

    def __add__(self, other):
        if isinstance(other, Number) and other == 0:
            return self
        other = RationalFunction.coerce(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den, den_roots=self.poles)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den,
                                den_roots=np.concatenate([self.poles, other.poles]))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, cancel=False, den_roots=self._poles)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) + (-self)

    def scale(self, c: float) -> 'RationalFunction':
        if c == 0 or self.is_zero:
            return RationalFunction.zero()
        return RationalFunction(self.num * float(c), self.den, cancel=False, den_roots=self._poles)

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        other = RationalFunction.coerce(other)
        if self.is_zero or other.is_zero:
            return RationalFunction.zero()
        if other.is_constant:
            return self.scale(other.num.leading)
        if self.is_constant:
            return other.scale(self.num.leading)
        return RationalFunction(self.num * other.num, self.den * other.den,
                                den_roots=np.concatenate([self.poles, other.poles]))

    __rmul__ = __mul__

    def inverse(self) -> 'RationalFunction':
        if self.is_zero:
            raise SingularError("inverse of zero")
        return RationalFunction(self.den, self.num, cancel=False)

    def __truediv__(self, other):
        if isinstance(other, Number):
            if other == 0:
                raise SingularError("inverse of zero")
            return self.scale(1. / other)
        return self * RationalFunction.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) * self.inverse()

    def cancel(self, tol: float = None) -> 'RationalFunction':
        return RationalFunction(self.num, self.den, cancel_tol=tol)

    def isclose(self, other, rtol=1e-6, atol=1e-9) -> bool:
        """Coefficient-wise equality of canonical forms"""
        other = RationalFunction.coerce(other)
        return self.num.allclose(other.num, rtol, atol) and self.den.allclose(other.den, rtol, atol)

    def __eq__(self, other):
        if not isinstance(other, (RationalFunction, Polynomial, Number)):
            return NotImplemented
        other = RationalFunction.coerce(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def to_dict(self):
        return {'num': self.num.to_list(), 'den': self.den.to_list()}

    def __repr__(self):
        return f"RationalFunction(num={self.num.to_list()}, den={self.den.to_list()})"


def rf_classify(r: RationalFunction) -> Classification:
    return r.classify()


def rf_arith(a, b, op: str) -> RationalFunction:
    a, b = RationalFunction.coerce(a), RationalFunction.coerce(b)
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    raise ValueError(f"Unknown operation `{op}`, expected one of add, sub, mul")


def rf_inverse(r: RationalFunction) -> RationalFunction:
    return RationalFunction.coerce(r).inverse()


def rf_cancel(r: RationalFunction, tol: float) -> RationalFunction:
    if not tol > 0:
        raise ValueError(f"cancellation tolerance must be positive, got {tol}")
    return RationalFunction.coerce(r).cancel(tol)
