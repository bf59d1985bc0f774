"""
Stability under additive perturbation R -> R + delta: S(delta) = S (I - delta S)^-1, robust
verdicts for a single delta and small-gain margins over norm balls.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union, Any

import numpy as np

from .perturbation import Perturbation
from ..context import current_tolerances
from ..exceptions import SingularError, IllPosedError, DimensionError
from ..realization import Realization
from ..tfmat import TransferMatrix, tm_inverse, tm_hinf_norm
from ..utilities import point_residual

__all__ = ['RobustReport', 'perturbed_stability', 'perturbation_residuals', 'robust_check', 'small_gain_margin',
           'StructuredMargins', 'structured_margins', 'stability_report', 'ill_posed_report']


@dataclass(frozen=True)
class RobustReport:
    stable: bool
    perturbed_S: Optional[TransferMatrix] = field(default=None, repr=False)
    witness: List[complex] = field(default_factory=list)
    unstable_entries: List[Tuple[int, int]] = field(default_factory=list)
    margin: Optional[float] = None
    well_posed: bool = True
    error: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict, repr=False)

    @property
    def verdict(self) -> str:
        if not self.well_posed:
            return 'ill-posed'
        return 'stable' if self.stable else 'unstable'


def stability_report(m: TransferMatrix, perturbed_S: TransferMatrix = None, **kwargs) -> RobustReport:
    """Report whose verdict is RH-infinity membership of `m`"""
    classification = m.classify()
    return RobustReport(stable=classification.all_stable_proper,
                        perturbed_S=m if perturbed_S is None else perturbed_S,
                        witness=classification.unstable_poles(),
                        unstable_entries=sorted(set(classification.unstable_entries())),
                        **kwargs)


def ill_posed_report(error: Exception, **kwargs) -> RobustReport:
    return RobustReport(stable=False, well_posed=False, error=getattr(error, 'message', str(error)), **kwargs)


def _delta(delta, n: int) -> TransferMatrix:
    if isinstance(delta, Perturbation):
        delta = delta.delta
    delta = TransferMatrix.coerce(delta)
    if delta.shape != (n, n):
        raise DimensionError(f"perturbation must be {n}x{n}, got {delta.shape}")
    return delta


def _well_posed_inverse(m: TransferMatrix) -> TransferMatrix:
    try:
        return tm_inverse(m)
    except SingularError as e:
        raise IllPosedError("perturbation destroys well-posedness", **e.details) from e


def perturbed_stability(S_hat, delta: Union[Perturbation, TransferMatrix], cross_check: bool = False,
                        R_hat: TransferMatrix = None) -> TransferMatrix:
    """
    S(delta) = S_hat (I - delta S_hat)^-1. With `cross_check`, the mirrored form
    (I - S_hat delta)^-1 S_hat and, when R_hat is given, (I - R_hat - delta)^-1 are compared
    against it and disagreements are logged.
    """
    S_hat = TransferMatrix.coerce(S_hat)
    n = S_hat.rows
    delta = _delta(delta, n)
    if delta.is_zero:
        return S_hat
    I = TransferMatrix.identity(n)
    S = S_hat @ _well_posed_inverse(I - delta @ S_hat)
    if cross_check:
        residuals = perturbation_residuals(S_hat, delta, R_hat, S)
        tol = current_tolerances().residual_tol
        for name, value in residuals.items():
            if value > tol:
                logging.warning(f"perturbed stability matrix disagrees with the {name} path by {value:.3g}")
    return S


def perturbation_residuals(S_hat, delta, R_hat=None, S=None) -> Dict[str, float]:
    """Residuals between S_hat(I - delta S_hat)^-1 and the other ways to compute S(delta)"""
    S_hat = TransferMatrix.coerce(S_hat)
    n = S_hat.rows
    delta = _delta(delta, n)
    I = TransferMatrix.identity(n)
    if S is None:
        S = S_hat @ _well_posed_inverse(I - delta @ S_hat)
    residuals = {'mirrored': point_residual(S, _well_posed_inverse(I - S_hat @ delta) @ S_hat)}
    if R_hat is not None:
        R_hat = R_hat.R if isinstance(R_hat, Realization) else TransferMatrix.coerce(R_hat)
        residuals['direct'] = point_residual(S, _well_posed_inverse(I - R_hat - delta))
    return residuals


def robust_check(S_hat, delta: Union[Perturbation, TransferMatrix]) -> RobustReport:
    """Is S_hat (I - delta S_hat)^-1 stable and proper? Ill-posedness is reported, not raised."""
    try:
        S = perturbed_stability(S_hat, delta)
    except IllPosedError as e:
        return ill_posed_report(e)
    return stability_report(S)


def small_gain_margin(M, grid_size: int = 512) -> float:
    """1 / |M|_inf: every delta with |delta|_inf below it keeps (I - delta M)^-1 stable"""
    norm = tm_hinf_norm(M, grid_size)
    return np.inf if norm == 0 else 1. / norm


@dataclass(frozen=True)
class StructuredMargins:
    per_block: Dict[Tuple[str, str], float]
    joint: float
    conservative: bool = True


def structured_margins(S_hat, space, structure, grid_size: int = 512) -> StructuredMargins:
    """
    Per-block margins 1 / |S_ba| for a perturbation entering R_ab alone, and a joint margin
    1 / (blocks * |S_BA|) over all blocks at once, which is only sufficient.
    """
    S_hat = TransferMatrix.coerce(S_hat)
    structure = [tuple(b) for b in structure]
    if not structure:
        raise ValueError("structured margins need at least one block")
    idx = space.indices
    per_block = {(a, b): small_gain_margin(S_hat.take(idx(b), idx(a)), grid_size) for a, b in structure}
    rows = list(dict.fromkeys(a for a, _ in structure))
    cols = list(dict.fromkeys(b for _, b in structure))
    norm = tm_hinf_norm(S_hat.take(idx(cols), idx(rows)), grid_size)
    joint = np.inf if norm == 0 else 1. / (len(structure) * norm)
    return StructuredMargins(per_block, joint)
