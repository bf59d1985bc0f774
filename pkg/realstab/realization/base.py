"""
Realizations eta = R eta + d over named signals, their stability matrices S = (I - R)^-1
and the internal stability test: every off-diagonal block of R proper and every entry of S
stable and proper.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple, Union, Iterable

import numpy as np

from .signals import SignalSpace
from ..context import current_tolerances
from ..exceptions import DimensionError, SingularError, HypothesisError
from ..tfmat import TransferMatrix, tm_inverse
from ..utilities import RESIDUAL_POINTS

__all__ = ['Realization', 'StabilityReport', 'EquivalenceReport', 'stability_of', 'check_internal',
           'dependent_column', 'transform', 'equiv_check', 'inverse_residual']

Names = Union[str, Iterable[str]]


class Realization:
    """
    A square transfer matrix R laid out over a SignalSpace.
    Causality of the off-diagonal blocks is checked by `check_internal`, not at construction.
    """
    __slots__ = ('space', 'R')

    def __init__(self, space: SignalSpace, R):
        if not isinstance(space, SignalSpace):
            space = SignalSpace(space)
        R = TransferMatrix.coerce(R)
        if R.shape != (space.total, space.total):
            raise DimensionError(f"R must be {space.total}x{space.total} for {space}, got {R.shape}")
        self.space = space
        self.R = R

    @classmethod
    def from_blocks(cls, space: SignalSpace, blocks: Mapping[Tuple[str, str], object]) -> 'Realization':
        """Assemble R from named blocks {(row signal, column signal): matrix}; absent blocks are zero"""
        if not isinstance(space, SignalSpace):
            space = SignalSpace(space)
        entries = TransferMatrix.zeros(space.total, space.total).entries.copy()
        for (a, b), block in blocks.items():
            if block is None:
                continue
            block = TransferMatrix.coerce(block)
            expected = (space.dim(a), space.dim(b))
            if block.shape != expected:
                raise DimensionError(f"block ({a}, {b}) must be {expected[0]}x{expected[1]}, got {block.shape}",
                                     block=[a, b])
            entries[space.slice(a), space.slice(b)] = block.entries
        return cls(space, TransferMatrix(entries))

    def block(self, rows: Names, cols: Names) -> TransferMatrix:
        return self.R.take(self.space.indices(rows), self.space.indices(cols))

    def identity_minus(self) -> TransferMatrix:
        return TransferMatrix.identity(self.space.total) - self.R

    def columns(self, S: TransferMatrix, names: Names) -> TransferMatrix:
        """The block columns of a total-sized matrix (typically S) belonging to `names`"""
        return S.take(np.arange(self.space.total), self.space.indices(names))

    def noncausal_blocks(self) -> List[Tuple[str, str]]:
        found = []
        for a in self.space.names:
            for b in self.space.names:
                if a != b and not all(e.proper for e in self.block(a, b).entries.ravel()):
                    found.append((a, b))
        return found

    def __eq__(self, other):
        if not isinstance(other, Realization):
            return NotImplemented
        return self.space == other.space and self.R == other.R

    def __hash__(self):
        return hash((self.space, self.R))

    def __repr__(self):
        return f"Realization({self.space})"


@dataclass(frozen=True)
class StabilityReport:
    causal_ok: bool
    noncausal_blocks: List[Tuple[str, str]]
    stable_ok: bool
    unstable_entries: List[Dict]
    residual: Optional[float]
    S: Optional[TransferMatrix] = field(default=None, repr=False)
    error: Optional[str] = None

    @property
    def internally_stable(self) -> bool:
        return self.causal_ok and self.stable_ok

    @property
    def verdict(self) -> str:
        if self.S is None:
            return 'no stability matrix'
        if not self.causal_ok:
            return 'non-causal'
        return 'stable' if self.stable_ok else 'unstable'

    @property
    def witness(self) -> List[complex]:
        """Unstable poles found in S"""
        poles = {complex(np.round(p, 9)) for e in self.unstable_entries for p in e['poles']}
        return sorted(poles, key=lambda p: (p.real, p.imag))


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    realization_residual: float
    stability_residual: float
    T_stable: bool
    T_inverse_stable: bool
    stable: Optional[Tuple[bool, bool]] = None


def inverse_residual(IR: TransferMatrix, S: TransferMatrix, points=RESIDUAL_POINTS) -> float:
    """max over residual points of ||(I-R)S - I|| and ||S(I-R) - I||"""
    n = IR.rows
    worst = 0.
    for z0 in points:
        a, s = IR.evaluate(z0), S.evaluate(z0)
        worst = max(worst, np.linalg.norm(a @ s - np.eye(n)), np.linalg.norm(s @ a - np.eye(n)))
    return float(worst)


def _stability(r: Realization) -> Tuple[TransferMatrix, float]:
    IR = r.identity_minus()
    try:
        S = tm_inverse(IR)
    except SingularError as e:
        raise SingularError("no stability matrix exists", **e.details) from e
    residual = inverse_residual(IR, S)
    tol = current_tolerances().residual_tol
    if residual > tol:
        logging.warning(f"(I - R)S = I holds only to {residual:.3g} (> {tol:.3g}) for {r}")
    return S, residual


def stability_of(r: Realization) -> TransferMatrix:
    """S = (I - R)^-1, the map from disturbances d to signals eta"""
    return _stability(r)[0]


def _unstable_entries(r: Realization, S: TransferMatrix) -> List[Dict]:
    labels = r.space.labels()
    limit = 1 - current_tolerances().pole_tol
    classification = S.classify()
    found = []
    for i, j in classification.unstable_entries():
        c = classification.entries[i, j]
        found.append({'row': labels[i], 'col': labels[j], 'properness': c.properness,
                      'poles': [p for p in c.poles if abs(p) >= limit]})
    return found


def check_internal(r: Realization) -> StabilityReport:
    noncausal = r.noncausal_blocks()
    try:
        S, residual = _stability(r)
    except SingularError as e:
        return StabilityReport(causal_ok=not noncausal, noncausal_blocks=noncausal, stable_ok=False,
                               unstable_entries=[], residual=None, S=None, error=e.message)
    unstable = _unstable_entries(r, S)
    return StabilityReport(causal_ok=not noncausal, noncausal_blocks=noncausal, stable_ok=not unstable,
                           unstable_entries=unstable, residual=residual, S=S)


def dependent_column(r: Realization, partial_S: Mapping[str, TransferMatrix], a: str) -> TransferMatrix:
    """
    The a-columns of S from the other columns: S[:, a] = e_a + sum_{b != a} S[:, b] R[b, a].
    Only valid when R[a, a] = 0.
    """
    space = r.space
    space.check(a)
    if not r.block(a, a).is_zero:
        raise HypothesisError(f"dependent column requires R[{a}, {a}] = 0", signal=a)
    others = [b for b in space.names if b != a]
    missing = [b for b in others if b not in partial_S]
    if missing:
        raise DimensionError(f"columns of S for {missing} are needed to recover `{a}`", missing=missing)
    column = space.selector(a)
    for b in others:
        Sb = TransferMatrix.coerce(partial_S[b])
        if Sb.shape != (space.total, space.dim(b)):
            raise DimensionError(f"S[:, {b}] must be {space.total}x{space.dim(b)}, got {Sb.shape}")
        Rba = r.block(b, a)
        if not Rba.is_zero:
            column = column + Sb @ Rba
    return column


def _check_transform_shape(r: Realization, T: TransferMatrix):
    n = r.space.total
    if T.shape != (n, n):
        raise DimensionError(f"T must be {n}x{n} for {r}, got {T.shape}")


def transform(r: Realization, T) -> Realization:
    """The equivalent realization with I - R_eq = T^-1 (I - R); its S is S T"""
    T = TransferMatrix.coerce(T)
    _check_transform_shape(r, T)
    T_inv = tm_inverse(T)
    n = r.space.total
    return Realization(r.space, TransferMatrix.identity(n) - T_inv @ r.identity_minus())


def equiv_check(r1: Realization, r2: Realization, T, tol: float = 1e-7, verdicts: bool = False) -> EquivalenceReport:
    """
    Checks that r2 is the T-transform of r1 at the residual points. The stability of T and T^-1 is
    reported alongside; internal-stability verdicts of both realizations only when `verdicts` is set.
    """
    T = TransferMatrix.coerce(T)
    if r1.space.total != r2.space.total:
        raise DimensionError(f"cannot compare {r1} with {r2}")
    _check_transform_shape(r1, T)
    n = r1.space.total
    IR1, IR2 = r1.identity_minus(), r2.identity_minus()
    realization_residual, stability_residual = 0., 0.
    for z0 in RESIDUAL_POINTS:
        a1, a2, t = IR1.evaluate(z0), IR2.evaluate(z0), T.evaluate(z0)
        try:
            realization_residual = max(realization_residual, np.linalg.norm(a2 - np.linalg.solve(t, a1)))
            s1, s2 = np.linalg.inv(a1), np.linalg.inv(a2)
        except np.linalg.LinAlgError as e:
            raise SingularError(f"singular matrix at residual point {z0}") from e
        stability_residual = max(stability_residual, np.linalg.norm(s2 - s1 @ t))
    T_inv = tm_inverse(T)
    stable = None
    if verdicts:
        stable = (check_internal(r1).internally_stable, check_internal(r2).internally_stable)
    return EquivalenceReport(equivalent=bool(realization_residual < tol and stability_residual < tol),
                             realization_residual=float(realization_residual),
                             stability_residual=float(stability_residual),
                             T_stable=T.classify().all_stable_proper,
                             T_inverse_stable=T_inv.classify().all_stable_proper,
                             stable=stable)
