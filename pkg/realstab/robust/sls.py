"""
Robustness of controllers built from approximate system responses: the response mismatch
appears as a perturbation delta and the loop is stable iff (I + delta)^-1 is.
"""
import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .additive import RobustReport, robust_check, stability_report, ill_posed_report, _well_posed_inverse
from .perturbation import Perturbation
from .sweep import monte_carlo, sample_ball
from ..context import current_tolerances
from ..exceptions import IllPosedError, HypothesisError, NotStableError, DimensionError, SingularError
from ..param import (SlsStateFeedback, SlsOutputFeedback, StateSpacePlant, sls_sf_controller, sls_of_controller)
from ..realization import state_feedback_realization, check_internal, stability_of
from ..tfmat import TransferMatrix, tm_block, tm_hinf_norm, z_minus

__all__ = ['SlsRobustReport', 'sls_sf_robust_check', 'sls_of_robust_check', 'sls_of_general_robust',
           'sls_of_norm_margin']


@dataclass(frozen=True)
class SlsRobustReport(RobustReport):
    delta: Optional[TransferMatrix] = field(default=None, repr=False)
    delta2: Optional[TransferMatrix] = field(default=None, repr=False)
    responses: Optional[TransferMatrix] = field(default=None, repr=False)


def _agree(name: str, verdict: bool, other: Optional[bool]):
    if other is not None and other != verdict:
        logging.warning(f"{name}: response-mismatch verdict {verdict} disagrees with the closed-loop verdict {other}")


def sls_sf_robust_check(phi_hat: SlsStateFeedback, A=None, B=None, cross_check: bool = False) -> SlsRobustReport:
    """
    delta = [zI - A, -B] [Phi_x; Phi_u] - I. The controller Phi_u Phi_x^-1 stabilizes (A, B) iff
    (I + delta)^-1 is stable, and the achieved responses are [Phi_x; Phi_u] (I + delta)^-1.
    """
    A = phi_hat.A if A is None else np.atleast_2d(np.asarray(A, dtype=float))
    B = phi_hat.B if B is None else np.atleast_2d(np.asarray(B, dtype=float))
    n = A.shape[0]
    for name, m in (('Phi_x', phi_hat.phi_x), ('Phi_u', phi_hat.phi_u)):
        c = m.classify()
        if not (c.all_stable_proper and c.all_strictly_proper):
            raise HypothesisError(f"{name} must be strictly proper and stable")
    I = TransferMatrix.identity(n)
    delta = (z_minus(A) @ phi_hat.phi_x - TransferMatrix.constant(B) @ phi_hat.phi_u - I).cancel()
    details = {}
    if cross_check:
        try:
            K = sls_sf_controller(phi_hat)
            details['cross_check'] = check_internal(state_feedback_realization(A, B, K)).internally_stable
        except SingularError:
            details['cross_check'] = None
    try:
        inverse = _well_posed_inverse(I + delta)
    except IllPosedError as e:
        return SlsRobustReport(**vars(ill_posed_report(e, details=details)), delta=delta)
    base = stability_report(inverse, details=details)
    _agree('state feedback', base.stable, details.get('cross_check'))
    responses = (phi_hat.stacked @ inverse).cancel()
    return SlsRobustReport(**vars(base), delta=delta, responses=responses)


def sls_of_robust_check(phi_hat: SlsOutputFeedback, plant: StateSpacePlant, cross_check: bool = False,
                        tol: float = 1e-7) -> SlsRobustReport:
    """
    Responses that satisfy [zI - A, -B] Phi = [I, 0] for the true `plant` but only approximately
    satisfy Phi [zI - A; -C] = [I; 0]. The mismatch defines
    delta1 = Phi_xx (zI - A) - Phi_xy C - I and delta2 = Phi_ux (zI - A) - Phi_uy C; the loop is
    stable iff (I + delta1)^-1 is, and the achieved responses are
    [[(I + delta1)^-1, 0], [-delta2 (I + delta1)^-1, I]] Phi.
    """
    first, _ = phi_hat.identity_residuals(plant)
    if first > tol:
        raise HypothesisError(f"responses violate [zI - A, -B] Phi = [I, 0] by {first:.3g}", residual=first)
    n, m = plant.states, plant.inputs
    ZA, C = z_minus(plant.A), TransferMatrix.constant(plant.C)
    I = TransferMatrix.identity(n)
    delta1 = (phi_hat.phi_xx @ ZA - phi_hat.phi_xy @ C - I).cancel()
    delta2 = (phi_hat.phi_ux @ ZA - phi_hat.phi_uy @ C).cancel()
    if not delta2.classify().all_stable_proper:
        logging.warning("delta2 is not stable; the responses do not satisfy the hypotheses of the check")
    details = {}
    if cross_check:
        try:
            K = sls_of_controller(phi_hat, phi_hat.plant.D if phi_hat.plant is not None else plant.D)
            details['cross_check'] = check_internal(plant.output_feedback(K)).internally_stable
        except SingularError:
            details['cross_check'] = None
    try:
        inverse = _well_posed_inverse(I + delta1)
    except IllPosedError as e:
        return SlsRobustReport(**vars(ill_posed_report(e, details=details)), delta=delta1, delta2=delta2)
    base = stability_report(inverse, details=details)
    _agree('output feedback', base.stable, details.get('cross_check'))
    weight = tm_block([[inverse, TransferMatrix.zeros(n, m)], [-(delta2 @ inverse), TransferMatrix.identity(m)]])
    responses = (weight @ phi_hat.stacked).cancel()
    return SlsRobustReport(**vars(base), delta=delta1, delta2=delta2, responses=responses)


def _plant_deltas(plant: StateSpacePlant, deltas: Mapping[str, object]):
    n, m, p = plant.states, plant.inputs, plant.outputs
    shapes = {'A': (n, n), 'B': (n, m), 'C': (p, n), 'D': (p, m)}
    unknown = set(deltas) - set(shapes)
    if unknown:
        raise DimensionError(f"unknown perturbation blocks {sorted(unknown)}, expected A, B, C, D")
    out = {}
    for k, shape in shapes.items():
        d = deltas.get(k)
        d = TransferMatrix.zeros(*shape) if d is None else TransferMatrix.coerce(d)
        if d.shape != shape:
            raise DimensionError(f"delta_{k} must be {shape[0]}x{shape[1]}, got {d.shape}")
        if not d.classify().all_stable_proper:
            raise NotStableError(f"delta_{k} must be stable and proper")
        out[k] = d
    return out


def sls_of_general_robust(phi_hat: SlsOutputFeedback, deltas: Mapping[str, object],
                          cross_check: bool = False) -> RobustReport:
    """
    Perturbed plant (A + dA, B + dB, C + dC, D + dD) under the controller of `phi_hat`: stable iff
    Psi = (I - [[dA, dB], [dC, dD]] Phi)^-1 is stable.
    """
    plant = phi_hat.plant
    if plant is None:
        raise ValueError("responses must carry their nominal plant")
    d = _plant_deltas(plant, deltas)
    n, m, p = plant.states, plant.inputs, plant.outputs
    dmat = tm_block([[d['A'], d['B']], [d['C'], d['D']]])
    details = {}
    if cross_check:
        details['cross_check'] = _general_cross_check(phi_hat, d)
    try:
        psi = _well_posed_inverse(TransferMatrix.identity(n + p) - dmat @ phi_hat.stacked)
    except IllPosedError as e:
        return ill_posed_report(e, details=details)
    report = stability_report(psi, details=details)
    _agree('plant perturbation', report.stable, details.get('cross_check'))
    return report


def _general_cross_check(phi_hat: SlsOutputFeedback, d) -> Optional[bool]:
    """robust_check of the [x, u, y] realization under [[dA, dB, 0], [0, 0, 0], [dC, dD, 0]]"""
    plant = phi_hat.plant
    try:
        K = sls_of_controller(phi_hat, plant.D)
        loop = plant.output_feedback(K)
        S_hat = stability_of(loop)
    except SingularError:
        return None
    delta = Perturbation.from_blocks(loop.space, {('x', 'x'): d['A'], ('x', 'u'): d['B'],
                                                  ('y', 'x'): d['C'], ('y', 'u'): d['D']})
    return robust_check(S_hat, delta).stable


def sls_of_norm_margin(phi_hat: SlsOutputFeedback, epsilon: float, spot_checks: int = 0, seed: int = 42) -> bool:
    """
    True iff |[[Phi_xx, Phi_xy], [Phi_ux, Phi_uy]]|_inf <= 1 / epsilon, in which case every
    plant perturbation of norm below epsilon is tolerated.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    if epsilon == 0:
        return True
    inside = bool(tm_hinf_norm(phi_hat.stacked) <= 1. / epsilon)
    if inside and spot_checks:
        plant = phi_hat.plant
        n, m, p = plant.states, plant.inputs, plant.outputs

        def check(rng):
            block = sample_ball(rng, (n + p, n + m), 0.99 * epsilon)
            deltas = {'A': block[:n, :n], 'B': block[:n, n:], 'C': block[n:, :n], 'D': block[n:, n:]}
            return sls_of_general_robust(phi_hat, deltas).stable

        evidence = monte_carlo(check, spot_checks, seed, description='plant perturbations')
        if evidence.failures:
            logging.warning(f"{len(evidence.failures)} of {spot_checks} sampled perturbations inside the margin "
                            f"destabilized the loop")
    return inside
