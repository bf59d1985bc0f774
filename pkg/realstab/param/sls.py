"""
System responses of state-feedback and output-feedback loops, FIR synthesis of the
state-feedback responses, and controller recovery from them.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
from scipy.linalg import lstsq, null_space

from .plant import StateSpacePlant
from ..context import current_tolerances
from ..exceptions import InfeasibleError, NotStableError, DimensionError
from ..realization import state_feedback_realization, check_internal
from ..tfmat import TransferMatrix, ImpulseSequence, tm_from_fir, tm_block
from ..utilities import RESIDUAL_POINTS, logtime, as_matrix

__all__ = ['SlsStateFeedback', 'SlsOutputFeedback', 'sls_sf_synthesize', 'sls_sf_controller',
           'sls_sf_from_controller', 'sls_of_from_controller', 'sls_of_controller', 'FIR_OBJECTIVE']

FIR_OBJECTIVE = 'fir-h2'


def _affine_residual(A, B, phi_x: TransferMatrix, phi_u: TransferMatrix, points=RESIDUAL_POINTS) -> float:
    """max over residual points of |(zI - A) Phi_x - B Phi_u - I|"""
    n = A.shape[0]
    worst = 0.
    for z0 in points:
        value = (z0 * np.eye(n) - A) @ phi_x.evaluate(z0) - B @ phi_u.evaluate(z0)
        worst = max(worst, np.linalg.norm(value - np.eye(n)))
    return float(worst)


@dataclass(frozen=True, eq=False)
class SlsStateFeedback:
    """
    Responses x = Phi_x d_x, u = Phi_u d_x of a state-feedback loop. `taps` holds the FIR
    coefficients when the pair was synthesized.
    """
    phi_x: TransferMatrix
    phi_u: TransferMatrix
    A: np.ndarray
    B: np.ndarray
    horizon: int = None
    taps: Tuple[ImpulseSequence, ImpulseSequence] = field(default=None, repr=False)
    metadata: Dict = field(default_factory=dict)

    def affine_residual(self, points=RESIDUAL_POINTS) -> float:
        return _affine_residual(self.A, self.B, self.phi_x, self.phi_u, points)

    @property
    def strictly_proper_stable(self) -> bool:
        return all(m.classify().all_stable_proper and m.classify().all_strictly_proper
                   for m in (self.phi_x, self.phi_u))

    @property
    def stacked(self) -> TransferMatrix:
        return tm_block([[self.phi_x], [self.phi_u]])

    def truncate(self, horizon: int) -> 'SlsStateFeedback':
        """The FIR pair cut to its first `horizon` taps; no longer feasible in general"""
        if self.taps is None:
            raise ValueError("only synthesized FIR responses can be truncated")
        x, u = (t.truncate(horizon) for t in self.taps)
        return SlsStateFeedback(tm_from_fir(x), tm_from_fir(u), self.A, self.B, horizon, (x, u),
                                dict(self.metadata, truncated_from=self.horizon))


def _plant_arrays(A, B):
    A, B = as_matrix(A, 'A'), as_matrix(B, 'B')
    if A.shape[0] != A.shape[1] or B.shape[0] != A.shape[0]:
        raise DimensionError(f"inconsistent shapes A{A.shape} B{B.shape}")
    return A, B


def sls_sf_synthesize(A, B, horizon: int) -> SlsStateFeedback:
    """
    FIR responses Phi_x[1] = I, Phi_x[t+1] = A Phi_x[t] + B Phi_u[t], Phi_x[T+1] = 0 that minimize
    sum_t |Phi_x[t]|_F^2 + |Phi_u[t]|_F^2. Solved column by column as one least-squares problem
    over the null space of the terminal constraint.
    """
    A, B = _plant_arrays(A, B)
    n, m = B.shape
    T = int(horizon)
    if T < 1:
        raise ValueError(f"horizon must be at least 1, got {horizon}")
    powers = [np.eye(n)]
    for _ in range(T):
        powers.append(A @ powers[-1])
    # x_stack = X0 + G u with x_t = A^(t-1) x_1 + sum_{s<t} A^(t-1-s) B u_s
    X0 = np.vstack(powers[:T])
    G = np.zeros((n * T, m * T))
    for t in range(T):
        for s in range(t):
            G[t * n:(t + 1) * n, s * m:(s + 1) * m] = powers[t - 1 - s] @ B
    E = np.hstack([powers[T - 1 - s] @ B for s in range(T)])
    rhs = -powers[T]
    with logtime(f"FIR state-feedback synthesis (n={n}, m={m}, T={T})"):
        particular = lstsq(E, rhs)[0]
        infeasibility = np.linalg.norm(E @ particular - rhs)
        if infeasibility > current_tolerances().residual_tol * max(1., np.linalg.norm(rhs)):
            raise InfeasibleError(f"terminal constraint infeasible at horizon {T} (residual {infeasibility:.3g}); "
                                  f"try a larger horizon", horizon=T, residual=float(infeasibility))
        N = null_space(E)
        u = particular
        if N.shape[1]:
            lhs = np.vstack([G @ N, N])
            target = -np.vstack([X0 + G @ particular, particular])
            u = particular + N @ lstsq(lhs, target)[0]
    phi_u = np.zeros((T + 1, m, n))
    phi_x = np.zeros((T + 1, n, n))
    phi_x[1] = np.eye(n)
    for t in range(1, T + 1):
        phi_u[t] = u[(t - 1) * m:t * m]
        if t < T:
            phi_x[t + 1] = A @ phi_x[t] + B @ phi_u[t]
    x, us = ImpulseSequence(phi_x), ImpulseSequence(phi_u)
    result = SlsStateFeedback(tm_from_fir(x), tm_from_fir(us), A, B, T, (x, us),
                              {'objective': FIR_OBJECTIVE, 'horizon': T})
    logging.info(f"synthesized FIR responses with affine residual {result.affine_residual():.3g}")
    return result


def sls_sf_controller(p: SlsStateFeedback) -> TransferMatrix:
    """K = Phi_u Phi_x^-1"""
    return (p.phi_u @ p.phi_x.inverse()).cancel()


def sls_sf_from_controller(A, B, K) -> SlsStateFeedback:
    """Phi_x, Phi_u read off the stability matrix of the state-feedback loop u = K x"""
    A, B = _plant_arrays(A, B)
    loop = state_feedback_realization(A, B, K)
    report = check_internal(loop)
    if not report.internally_stable:
        raise NotStableError(f"state-feedback loop is not internally stable ({report.verdict})",
                             entries=report.unstable_entries)
    idx = loop.space.indices
    return SlsStateFeedback(report.S.take(idx('x'), idx('x')), report.S.take(idx('u'), idx('x')), A, B)


@dataclass(frozen=True, eq=False)
class SlsOutputFeedback:
    """
    Output-feedback responses [x; u] = [[Phi_xx, Phi_xy], [Phi_ux, Phi_uy]] [d_x; d_y]
    """
    phi_xx: TransferMatrix
    phi_ux: TransferMatrix
    phi_xy: TransferMatrix
    phi_uy: TransferMatrix
    plant: StateSpacePlant = field(default=None, repr=False)

    @property
    def stacked(self) -> TransferMatrix:
        return tm_block([[self.phi_xx, self.phi_xy], [self.phi_ux, self.phi_uy]])

    def identity_residuals(self, plant: StateSpacePlant = None, points=RESIDUAL_POINTS) -> Tuple[float, float]:
        """
        Residuals of [zI - A, -B] Phi = [I, 0] and Phi [zI - A; -C] = [I; 0]
        """
        plant = self.plant if plant is None else plant
        A, B, C = plant.A, plant.B, plant.C
        n, p = plant.states, plant.outputs
        m = plant.inputs
        left, right = 0., 0.
        for z0 in points:
            phi = self.stacked.evaluate(z0)
            za = z0 * np.eye(n) - A
            left = max(left, np.linalg.norm(np.hstack([za, -B]) @ phi - np.hstack([np.eye(n), np.zeros((n, p))])))
            right = max(right, np.linalg.norm(phi @ np.vstack([za, -C]) - np.vstack([np.eye(n), np.zeros((m, n))])))
        return float(left), float(right)

    @property
    def properness_ok(self) -> bool:
        """Phi_xx, Phi_xy, Phi_ux strictly proper and stable; Phi_uy stable and proper"""
        strict = all(m.classify().all_stable_proper and m.classify().all_strictly_proper
                     for m in (self.phi_xx, self.phi_xy, self.phi_ux))
        return strict and self.phi_uy.classify().all_stable_proper

    @property
    def K0(self) -> TransferMatrix:
        """Phi_uy - Phi_ux Phi_xx^-1 Phi_xy"""
        gain = (self.phi_xx.inverse().cancel() @ self.phi_xy).cancel()
        return (self.phi_uy - (self.phi_ux @ gain).cancel()).cancel()


def sls_of_from_controller(plant: StateSpacePlant, K) -> SlsOutputFeedback:
    loop = plant.output_feedback(K)
    report = check_internal(loop)
    if not report.internally_stable:
        raise NotStableError(f"output-feedback loop is not internally stable ({report.verdict})",
                             entries=report.unstable_entries)
    idx = loop.space.indices
    S = report.S
    return SlsOutputFeedback(phi_xx=S.take(idx('x'), idx('x')), phi_ux=S.take(idx('u'), idx('x')),
                             phi_xy=S.take(idx('x'), idx('y')), phi_uy=S.take(idx('u'), idx('y')), plant=plant)


def sls_of_controller(p: SlsOutputFeedback, D=None) -> TransferMatrix:
    """K = K0 (I + D K0)^-1 with K0 = Phi_uy - Phi_ux Phi_xx^-1 Phi_xy"""
    K0 = p.K0
    if D is None:
        D = p.plant.D if p.plant is not None else 0
    D = np.atleast_2d(np.asarray(D, dtype=float))
    if not np.any(D):
        return K0
    m, q = K0.shape
    if D.shape != (q, m):
        raise DimensionError(f"D must be {q}x{m}, got {D.shape}")
    loop = (TransferMatrix.identity(q) + TransferMatrix.constant(D) @ K0).cancel()
    return (K0 @ loop.inverse().cancel()).cancel()
