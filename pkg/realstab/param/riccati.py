import logging

import numpy as np

from .plant import spectral_radius
from ..exceptions import RiccatiError, DimensionError
from ..utilities import as_matrix

__all__ = ['riccati_gain', 'riccati_update']

RICCATI_TOL = 1e-11
RICCATI_MAX_ITER = 10_000


def riccati_update(A, B, Q, R, P):
    """One step of P <- A'PA - A'PB (R + B'PB)^-1 B'PA + Q"""
    BtPA = B.T @ P @ A
    return A.T @ P @ A - BtPA.T @ np.linalg.solve(R + B.T @ P @ B, BtPA) + Q


def riccati_gain(A, B, Q=None, R=None, max_iter: int = RICCATI_MAX_ITER, tol: float = RICCATI_TOL) -> np.ndarray:
    """
    Stabilizing state-feedback gain F (u = F x) from the fixed point of the discrete Riccati
    recursion started at P = Q. The closed loop A + BF is checked to be Schur stable.
    """
    A, B = as_matrix(A, 'A'), as_matrix(B, 'B')
    n, m = B.shape
    if A.shape != (n, n):
        raise DimensionError(f"A must be {n}x{n} to match B{B.shape}, got {A.shape}")
    Q = np.eye(n) if Q is None else as_matrix(Q, 'Q')
    R = np.eye(m) if R is None else as_matrix(R, 'R')
    P = Q.copy()
    converged = False
    with np.errstate(all='ignore'):
        for iteration in range(max_iter):
            try:
                new = riccati_update(A, B, Q, R, P)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(new)):
                break
            diff = np.max(np.abs(new - P))
            P = new
            if diff < tol * max(1., np.max(np.abs(P))):
                converged = True
                break
    if not converged:
        raise RiccatiError("Riccati iteration failed (stabilizability?)", iterations=max_iter)
    logging.info(f"Riccati iteration converged after {iteration + 1} steps")
    F = -np.linalg.solve(R + B.T @ P @ B, B.T @ P @ A)
    radius = spectral_radius(A + B @ F)
    if not radius < 1:
        raise RiccatiError(f"Riccati iteration failed (stabilizability?): closed loop spectral radius {radius:.6g}",
                           spectral_radius=radius)
    return F
