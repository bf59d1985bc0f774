import logging
from contextlib import nullcontext
from dataclasses import dataclass, field
from numbers import Number
from typing import List, Sequence, Tuple

import numpy as np

from ..context import current_tolerances
from ..exceptions import DimensionError, SingularError
from ..ratcore import Polynomial, RationalFunction, Classification, IMPROPER
from ..utilities import SINGULARITY_POINTS, RESIDUAL_POINTS, logtime

__all__ = ['TransferMatrix', 'MatrixClassification', 'tm_block', 'tm_mul', 'tm_add', 'tm_sub', 'tm_scale',
           'tm_inverse', 'tm_classify', 'Z']

# coefficients interpolated below this fraction of the largest sample are roundoff
INTERPOLATION_NOISE = 1e-12


@dataclass(frozen=True)
class MatrixClassification:
    all_proper: bool
    all_strictly_proper: bool
    all_stable_proper: bool
    entries: np.ndarray = field(repr=False)  # object array of Classification

    def improper_entries(self) -> List[Tuple[int, int]]:
        return [(i, j) for (i, j), c in np.ndenumerate(self.entries) if c.properness == IMPROPER]

    def unstable_entries(self) -> List[Tuple[int, int]]:
        return [(i, j) for (i, j), c in np.ndenumerate(self.entries) if not c.stable]

    def unstable_poles(self) -> List[complex]:
        limit = 1 - current_tolerances().pole_tol
        found = [p for c in self.entries.ravel() for p in c.poles if abs(p) >= limit]
        return sorted(set(np.round(found, 9)), key=lambda p: (p.real, p.imag))


class TransferMatrix:
    """
    Dense rows x cols matrix of rational functions in z. Values are immutable;
    every arithmetic operation returns a new matrix with canonical entries.
    """
    __slots__ = ('_entries',)
    __array_ufunc__ = None

    def __init__(self, entries):
        if isinstance(entries, TransferMatrix):
            entries = entries._entries
        if isinstance(entries, np.ndarray) and entries.dtype != object:
            entries = np.atleast_2d(entries)
            if np.iscomplexobj(entries):
                raise TypeError("Transfer matrices have real coefficients")
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise DimensionError("a transfer matrix needs at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise DimensionError(f"ragged rows: lengths {[len(r) for r in rows]}")
        arr = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                arr[i, j] = RationalFunction.coerce(float(x) if isinstance(x, np.generic) else x)
        arr.setflags(write=False)
        self._entries = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> 'TransferMatrix':
        obj = cls.__new__(cls)
        arr = np.array(arr, dtype=object)
        arr.setflags(write=False)
        obj._entries = arr
        return obj

    @classmethod
    def coerce(cls, x) -> 'TransferMatrix':
        if isinstance(x, TransferMatrix):
            return x
        if isinstance(x, (Number, RationalFunction)):
            return cls([[x]])
        if isinstance(x, np.ndarray) and x.dtype != object:
            return cls(np.atleast_2d(np.asarray(x, dtype=float)))
        return cls(x)

    @classmethod
    def identity(cls, n: int) -> 'TransferMatrix':
        return cls.constant(np.eye(n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'TransferMatrix':
        arr = np.empty((rows, cols), dtype=object)
        for idx in np.ndindex(rows, cols):
            arr[idx] = RationalFunction.zero()
        return cls._wrap(arr)

    @classmethod
    def constant(cls, a) -> 'TransferMatrix':
        a = np.atleast_2d(np.asarray(a, dtype=float))
        arr = np.empty(a.shape, dtype=object)
        for idx, v in np.ndenumerate(a):
            arr[idx] = RationalFunction.constant(v)
        return cls._wrap(arr)

    @classmethod
    def scalar(cls, r) -> 'TransferMatrix':
        return cls([[r]])

    @classmethod
    def diag(cls, *blocks) -> 'TransferMatrix':
        grid = [[blocks[i] if i == j else None for j in range(len(blocks))] for i in range(len(blocks))]
        return tm_block(grid)

    @property
    def shape(self) -> Tuple[int, int]:
        return self._entries.shape

    @property
    def rows(self) -> int:
        return self._entries.shape[0]

    @property
    def cols(self) -> int:
        return self._entries.shape[1]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for e in self._entries.ravel())

    @property
    def T(self) -> 'TransferMatrix':
        return TransferMatrix._wrap(self._entries.T)

    def __getitem__(self, item):
        got = self._entries[item]
        if isinstance(got, RationalFunction):
            return got
        if got.ndim == 1:
            i, j = item
            got = got.reshape(1, -1) if isinstance(i, (int, np.integer)) else got.reshape(-1, 1)
        return TransferMatrix._wrap(got)

    def __iter__(self):
        raise TypeError("TransferMatrix is not iterable; index entries with m[i, j]")

    def _check_same_shape(self, other, op):
        if self.shape != other.shape:
            raise DimensionError(f"cannot {op} matrices of shapes {self.shape} and {other.shape}")

    def __add__(self, other):
        other = _coerce_like(other, self)
        self._check_same_shape(other, 'add')
        return TransferMatrix._wrap(self._entries + other._entries)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_like(other, self)
        self._check_same_shape(other, 'subtract')
        return TransferMatrix._wrap(self._entries - other._entries)

    def __rsub__(self, other):
        return _coerce_like(other, self) - self

    def __neg__(self):
        return TransferMatrix._wrap(-self._entries)

    def __mul__(self, other):
        """Scaling by a number or a scalar rational function"""
        if isinstance(other, TransferMatrix):
            raise TypeError("use @ for matrix products")
        if isinstance(other, (Number, RationalFunction)):
            out = np.empty(self.shape, dtype=object)
            for idx, e in np.ndenumerate(self._entries):
                out[idx] = e * other
            return TransferMatrix._wrap(out)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        other = TransferMatrix.coerce(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = np.empty((self.rows, other.cols), dtype=object)
        for i in range(self.rows):
            for j in range(other.cols):
                acc = RationalFunction.zero()
                for k in range(self.cols):
                    a, b = self._entries[i, k], other._entries[k, j]
                    if a.is_zero or b.is_zero:
                        continue
                    acc = acc + a * b
                out[i, j] = acc
        return TransferMatrix._wrap(out)

    def __rmatmul__(self, other):
        return TransferMatrix.coerce(other) @ self

    def inverse(self) -> 'TransferMatrix':
        return tm_inverse(self)

    def classify(self) -> MatrixClassification:
        return tm_classify(self)

    def evaluate(self, z0) -> np.ndarray:
        out = np.empty(self.shape, dtype=complex)
        for idx, e in np.ndenumerate(self._entries):
            out[idx] = e(z0)
        return out

    def evaluate_many(self, points) -> np.ndarray:
        """Values at every point in `points`, shape (len(points), rows, cols)"""
        points = np.asarray(points, dtype=complex)
        out = np.empty((len(points),) + self.shape, dtype=complex)
        for (i, j), e in np.ndenumerate(self._entries):
            out[:, i, j] = e(points)
        return out

    def cancel(self, tol: float = None) -> 'TransferMatrix':
        return TransferMatrix._wrap(np.vectorize(lambda e: e.cancel(tol), otypes=[object])(self._entries))

    def take(self, rows, cols) -> 'TransferMatrix':
        """Sub-matrix at the given row and column positions"""
        return TransferMatrix._wrap(self._entries[np.ix_(np.asarray(rows, dtype=int), np.asarray(cols, dtype=int))])

    def split(self, row_sizes: Sequence[int], col_sizes: Sequence[int]) -> List[List['TransferMatrix']]:
        if sum(row_sizes) != self.rows or sum(col_sizes) != self.cols:
            raise DimensionError(f"block sizes {list(row_sizes)} x {list(col_sizes)} do not tile {self.shape}")
        r0 = np.cumsum([0] + list(row_sizes))
        c0 = np.cumsum([0] + list(col_sizes))
        return [[self[r0[i]:r0[i + 1], c0[j]:c0[j + 1]] for j in range(len(col_sizes))]
                for i in range(len(row_sizes))]

    def isclose(self, other, rtol=1e-6, atol=1e-9) -> bool:
        other = TransferMatrix.coerce(other)
        return self.shape == other.shape and all(a.isclose(b, rtol, atol) for a, b in
                                                 zip(self._entries.ravel(), other._entries.ravel()))

    def residual(self, other=None, points=RESIDUAL_POINTS) -> float:
        from ..utilities import point_residual
        return point_residual(self, other, points)

    def __eq__(self, other):
        if not isinstance(other, TransferMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self._entries.ravel(), other._entries.ravel()))

    def __hash__(self):
        return hash((self.shape, tuple(self._entries.ravel())))

    def to_list(self):
        return [[e.to_dict() for e in row] for row in self._entries]

    def __repr__(self):
        return f"TransferMatrix(shape={self.shape})"


def _coerce_like(x, like: TransferMatrix) -> TransferMatrix:
    """Numbers broadcast as multiples of the identity when `like` is square, else entrywise"""
    if isinstance(x, (Number, RationalFunction)):
        if like.rows == like.cols:
            return TransferMatrix.identity(like.rows) * x
        raise DimensionError(f"cannot combine a scalar with a non-square {like.shape} matrix")
    return TransferMatrix.coerce(x)


Z = RationalFunction.z()


def tm_block(blocks) -> TransferMatrix:
    """
    Assemble a matrix from a 2D grid of blocks. `None` or 0 marks a zero block whose size is
    taken from its block row and block column.
    """
    grid = [[None if b is None or (isinstance(b, Number) and b == 0) else TransferMatrix.coerce(b) for b in row]
            for row in blocks]
    if not grid or any(len(row) != len(grid[0]) for row in grid):
        raise DimensionError("block grid rows have different lengths")
    heights, widths = [None] * len(grid), [None] * len(grid[0])
    for i, row in enumerate(grid):
        for j, b in enumerate(row):
            if b is None:
                continue
            if heights[i] is not None and heights[i] != b.rows:
                raise DimensionError(f"block ({i}, {j}) has {b.rows} rows but block row {i} has {heights[i]}")
            if widths[j] is not None and widths[j] != b.cols:
                raise DimensionError(f"block ({i}, {j}) has {b.cols} cols but block column {j} has {widths[j]}")
            heights[i], widths[j] = b.rows, b.cols
    if None in heights or None in widths:
        raise DimensionError(f"cannot infer the size of an all-zero block row/column "
                             f"(rows {heights}, cols {widths})")
    out = TransferMatrix.zeros(sum(heights), sum(widths))._entries.copy()
    r0 = np.cumsum([0] + heights)
    c0 = np.cumsum([0] + widths)
    for i, row in enumerate(grid):
        for j, b in enumerate(row):
            if b is not None:
                out[r0[i]:r0[i + 1], c0[j]:c0[j + 1]] = b._entries
    return TransferMatrix._wrap(out)


def tm_mul(a, b) -> TransferMatrix:
    return TransferMatrix.coerce(a) @ TransferMatrix.coerce(b)


def tm_add(a, b) -> TransferMatrix:
    return TransferMatrix.coerce(a) + TransferMatrix.coerce(b)


def tm_sub(a, b) -> TransferMatrix:
    return TransferMatrix.coerce(a) - TransferMatrix.coerce(b)


def tm_scale(m, c) -> TransferMatrix:
    return TransferMatrix.coerce(m) * c


def _is_numerically_zero(e: RationalFunction, tol: float) -> bool:
    if e.is_zero:
        return True
    with np.errstate(all='ignore'):
        return all(abs(e(p)) < tol for p in SINGULARITY_POINTS)


@dataclass
class _RowDenominator:
    """z^power times the product of the distinct non-monomial denominator factors of one row"""
    power: int = 0
    factors: List[Polynomial] = field(default_factory=list)

    @classmethod
    def of(cls, row) -> '_RowDenominator':
        d = cls()
        for e in row:
            if e.is_zero:
                continue
            k = e.den.low_order_zeros()
            d.power = max(d.power, k)
            rest = e.den.shift(-k)
            if rest.degree > 0 and not any(rest.allclose(f) for f in d.factors):
                d.factors.append(rest)
        return d

    @property
    def polynomial(self) -> Polynomial:
        p = Polynomial.monomial(self.power)
        for f in self.factors:
            p = p * f
        return p

    def cofactor(self, den: Polynomial) -> Tuple[int, List[Polynomial]]:
        """self / den as (power of z, remaining factors)"""
        k = den.low_order_zeros()
        rest = den.shift(-k)
        own = next((i for i, f in enumerate(self.factors) if rest.degree > 0 and rest.allclose(f)), None)
        return self.power - k, [f for i, f in enumerate(self.factors) if i != own]


def _interpolate(values: np.ndarray, noise: float) -> Polynomial:
    """Polynomial through `values` at the len(values)-th roots of unity"""
    c = (np.fft.fft(values) / len(values)).real
    c[np.abs(c) <= noise] = 0.
    return Polynomial(c, drop_tol=0.)


def _adjugate(values: np.ndarray) -> np.ndarray:
    n = values.shape[-1]
    adj = np.ones_like(values)
    if n == 1:
        return adj
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(values, i, axis=-2), j, axis=-1)
            adj[:, j, i] = (-1) ** (i + j) * np.linalg.det(minor)
    return adj


def tm_inverse(m) -> TransferMatrix:
    """
    Inverse over the field of rational functions. Each row i is cleared by the product D_i of
    its distinct denominators, so M = diag(D)^-1 N with N polynomial and M^-1 = adj(N) diag(D) / det(N).
    det(N) and adj(N) are interpolated from their values at roots of unity.
    """
    m = TransferMatrix.coerce(m)
    if m.rows != m.cols:
        raise DimensionError(f"only square matrices are invertible, got {m.shape}")
    n = m.rows
    tol = current_tolerances()
    if n == 1:
        if _is_numerically_zero(m[0, 0], tol.singular_tol):
            raise SingularError("transfer matrix singular", rank=0)
        return TransferMatrix([[m[0, 0].inverse()]])
    rows = [_RowDenominator.of(row) for row in m.entries]
    degrees = np.zeros((n, n), dtype=int)
    cofactors = {}
    for (i, j), e in np.ndenumerate(m.entries):
        if e.is_zero:
            continue
        power, factors = rows[i].cofactor(e.den)
        cofactors[i, j] = power, factors
        degrees[i, j] = int(e.num.degree) + power + sum(int(f.degree) for f in factors)
    samples = int(degrees.max(axis=1).sum()) + 1
    zs = np.exp(2j * np.pi * np.arange(samples) / samples)
    values = np.zeros((samples, n, n), dtype=complex)
    for (i, j), (power, factors) in cofactors.items():
        v = m[i, j].num(zs) * zs ** power
        for f in factors:
            v = v * f(zs)
        values[:, i, j] = v
    with logtime(f"inverting a {n}x{n} transfer matrix") if n >= 6 else nullcontext():
        det = np.linalg.det(values)
        # Hadamard bound per sample
        scale = np.prod(np.linalg.norm(values, axis=2), axis=1)
        with np.errstate(all='ignore'):
            relative = np.where(scale > 0, np.abs(det) / scale, 0.)
        if not relative.max() > tol.singular_tol:
            rank = int(np.linalg.matrix_rank(values[0], tol=tol.singular_tol * max(scale[0], 1.)))
            raise SingularError("transfer matrix singular", rank=rank)
        adj = _adjugate(values)
        den = _interpolate(det, INTERPOLATION_NOISE * np.max(np.abs(det)))
        noise = INTERPOLATION_NOISE * np.max(np.abs(adj))
        inv = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                num = _interpolate(adj[:, i, j], noise)
                inv[i, j] = RationalFunction(num * rows[j].polynomial if not num.is_zero else 0., den)
    result = TransferMatrix._wrap(inv)
    _check_inverse(m, result, tol.residual_tol)
    return result


def _check_inverse(m: TransferMatrix, inv: TransferMatrix, tol: float):
    n = m.rows
    worst = 0.
    for z0 in RESIDUAL_POINTS:
        with np.errstate(all='ignore'):
            a, b = m.evaluate(z0), inv.evaluate(z0)
            if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
                continue
            scale = max(1., np.linalg.norm(a) * np.linalg.norm(b))
            worst = max(worst, np.linalg.norm(a @ b - np.eye(n)) / scale)
    if worst > tol:
        logging.warning(f"inverse residual {worst:.3g} exceeds {tol:.3g} for a {n}x{n} transfer matrix")


def tm_classify(m) -> MatrixClassification:
    m = TransferMatrix.coerce(m)
    entries = np.empty(m.shape, dtype=object)
    for idx, e in np.ndenumerate(m.entries):
        entries[idx] = e.classify()
    flat = entries.ravel()
    return MatrixClassification(
        all_proper=all(c.properness != IMPROPER for c in flat),
        all_strictly_proper=all(c.properness == 'strictly_proper' for c in flat),
        all_stable_proper=all(c.stable for c in flat),
        entries=entries)
