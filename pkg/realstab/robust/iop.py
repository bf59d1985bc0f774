import logging

import numpy as np

from .additive import RobustReport, robust_check, stability_report, ill_posed_report, _well_posed_inverse
from .sweep import monte_carlo, sample_ball
from ..exceptions import IllPosedError, NotStableError, DimensionError
from ..param import IopQuadruple
from ..tfmat import TransferMatrix, tm_hinf_norm, tm_block

__all__ = ['robust_iop_margin', 'iop_nominal_robust_check']


def iop_nominal_robust_check(quad: IopQuadruple, delta_G, cross_check: bool = False) -> RobustReport:
    """
    The controller of `quad` stabilizes G + delta_G iff (I - delta_G U)^-1 is stable.
    """
    delta_G = TransferMatrix.coerce(delta_G)
    m, p = quad.U.shape
    if delta_G.shape != (p, m):
        raise DimensionError(f"plant perturbation must be {p}x{m}, got {delta_G.shape}")
    classification = delta_G.classify()
    if not classification.all_stable_proper:
        raise NotStableError("plant perturbation must be stable and proper", entries=classification.unstable_entries())
    details = {}
    if cross_check:
        delta = tm_block([[TransferMatrix.zeros(p, p), delta_G], [TransferMatrix.zeros(m, p), TransferMatrix.zeros(m, m)]])
        details['cross_check'] = robust_check(quad.S, delta).stable
    try:
        inverse = _well_posed_inverse(TransferMatrix.identity(p) - delta_G @ quad.U)
    except IllPosedError as e:
        return ill_posed_report(e, details=details)
    report = stability_report(inverse, details=details)
    if cross_check and details['cross_check'] != report.stable:
        logging.warning(f"plant-perturbation verdict {report.stable} disagrees with the realization path")
    return report


def robust_iop_margin(quad: IopQuadruple, epsilon: float, spot_checks: int = 0, seed: int = 42) -> bool:
    """
    True iff |U|_inf <= 1 / epsilon. With `spot_checks`, that many constant plant perturbations of
    norm just below epsilon are checked too and failures are logged.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    norm = tm_hinf_norm(quad.U)
    inside = bool(epsilon == 0 or norm <= 1. / epsilon)
    if inside and spot_checks and epsilon > 0:
        m, p = quad.U.shape
        evidence = monte_carlo(
            lambda rng: iop_nominal_robust_check(quad, sample_ball(rng, (p, m), 0.99 * epsilon)).stable,
            spot_checks, seed, description='plant perturbations')
        if evidence.failures:
            logging.warning(f"{len(evidence.failures)} of {spot_checks} sampled perturbations inside the margin "
                            f"destabilized the loop")
    return inside
