from typing import Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .matrix import TransferMatrix
from ..context import current_tolerances
from ..exceptions import NotStableError

__all__ = ['tm_hinf_norm', 'peak_gain', 'sigma_max']


def sigma_max(m: TransferMatrix, omegas) -> np.ndarray:
    """Largest singular value of m(e^{jw}) for each w"""
    values = m.evaluate_many(np.exp(1j * np.atleast_1d(np.asarray(omegas, dtype=float))))
    return np.linalg.svd(values, compute_uv=False)[:, 0]


def peak_gain(m, grid_size: int = 512) -> Tuple[float, float]:
    """
    Returns (norm, frequency) of the H-infinity norm of a stable proper matrix.
    The frequency grid on [0, pi] is refined around its argmax by a bounded
    golden-section/Brent search, so the value is approximate from below.
    """
    m = TransferMatrix.coerce(m)
    if grid_size < 2:
        raise ValueError(f"grid_size must be at least 2, got {grid_size}")
    classification = m.classify()
    if not classification.all_stable_proper:
        bad = sorted(set(classification.unstable_entries()) | set(classification.improper_entries()))
        raise NotStableError("H∞ norm requires RH∞ membership", entries=[list(e) for e in bad])
    if m.is_zero:
        return 0., 0.
    omegas = np.linspace(0., np.pi, grid_size)
    sv = sigma_max(m, omegas)
    k = int(np.argmax(sv))
    best, arg = float(sv[k]), float(omegas[k])
    lo, hi = omegas[max(k - 1, 0)], omegas[min(k + 1, grid_size - 1)]
    found = minimize_scalar(lambda w: -sigma_max(m, w)[0], bounds=(lo, hi), method='bounded',
                            options={'xatol': current_tolerances().hinf_tol})
    if -found.fun > best:
        best, arg = float(-found.fun), float(found.x)
    return best, arg


def tm_hinf_norm(m, grid_size: int = 512) -> float:
    return peak_gain(m, grid_size)[0]
