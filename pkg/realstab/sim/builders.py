"""
Realizations of state-feedback SLS controllers over the signals [x, u, delta]:

- original:   u = z Phi_u delta, delta = x + (I - z Phi_x) delta
- deployment: u = z Phi_u delta, delta = x - z^-1 (A x + B u)
- separated:  the original form with a pair (Pc, Mc) in place of (Phi_x, Phi_u)
"""
from dataclasses import dataclass
from typing import Optional

from ..context import current_tolerances
from ..exceptions import DimensionError, HypothesisError, SingularError
from ..param import SlsStateFeedback
from ..ratcore import RationalFunction
from ..realization import Realization, SignalSpace
from ..tfmat import TransferMatrix, shift_block, tm_block, z_minus
from ..utilities import as_matrix, point_residual

__all__ = ['sls_original_realization', 'sls_deployment_realization', 'sls_separated_realization',
           'SeparationReport', 'verify_separation']

Z = RationalFunction.z()
Z_INV = RationalFunction([1.], [0., 1.], cancel=False)


def _space(A, B) -> SignalSpace:
    A, B = as_matrix(A, 'A'), as_matrix(B, 'B')
    if A.shape[0] != A.shape[1] or B.shape[0] != A.shape[0]:
        raise DimensionError(f"inconsistent shapes A{A.shape} B{B.shape}")
    n, m = B.shape
    return SignalSpace.of(('x', n), ('u', m), ('delta', n))


def _responses(space: SignalSpace, phi_x, phi_u):
    n, m = space.dim('x'), space.dim('u')
    phi_x, phi_u = TransferMatrix.coerce(phi_x), TransferMatrix.coerce(phi_u)
    if phi_x.shape != (n, n) or phi_u.shape != (m, n):
        raise DimensionError(f"responses must be {n}x{n} and {m}x{n}, got {phi_x.shape} and {phi_u.shape}")
    return phi_x, phi_u


def sls_original_realization(A, B, phi_x, phi_u) -> Realization:
    space = _space(A, B)
    phi_x, phi_u = _responses(space, phi_x, phi_u)
    n = space.dim('x')
    return Realization.from_blocks(space, {
        ('x', 'x'): shift_block(as_matrix(A, 'A')),
        ('x', 'u'): TransferMatrix.constant(as_matrix(B, 'B')),
        ('u', 'delta'): (phi_u * Z).cancel(),
        ('delta', 'x'): TransferMatrix.identity(n),
        ('delta', 'delta'): (TransferMatrix.identity(n) - phi_x * Z).cancel(),
    })


def sls_deployment_realization(A, B, phi_u) -> Realization:
    """Needs only Phi_u; internally stable when A is Schur stable"""
    A, B = as_matrix(A, 'A'), as_matrix(B, 'B')
    space = _space(A, B)
    phi_u = TransferMatrix.coerce(phi_u)
    if phi_u.shape != (space.dim('u'), space.dim('x')):
        raise DimensionError(f"Phi_u must be {space.dim('u')}x{space.dim('x')}, got {phi_u.shape}")
    return Realization.from_blocks(space, {
        ('x', 'x'): shift_block(A),
        ('x', 'u'): TransferMatrix.constant(B),
        ('u', 'delta'): (phi_u * Z).cancel(),
        ('delta', 'x'): z_minus(A) * Z_INV,
        ('delta', 'u'): TransferMatrix.constant(-B) * Z_INV,
    })


def sls_separated_realization(A, B, Pc, Mc) -> Realization:
    return sls_original_realization(A, B, Pc, Mc)


@dataclass(frozen=True)
class SeparationReport:
    satisfied: bool
    residual: float
    certified: Optional[bool] = None


def verify_separation(phi: SlsStateFeedback, Pc, Mc, tol: float = None, certify: bool = False) -> SeparationReport:
    """
    Checks [Phi_x; Phi_u] [zI - A, -B] [Pc; Mc] = [Pc; Mc]. With `certify`, also checks that
    z^-1 ([zI - A, -B] [Pc; Mc])^-1 is strictly proper and stable, which makes the separated
    realization internally stable without simulating it.
    """
    tol = current_tolerances().residual_tol if tol is None else tol
    space = _space(phi.A, phi.B)
    Pc, Mc = _responses(space, Pc, Mc)
    if not all(e.proper for m in (Pc, Mc) for e in m.entries.ravel()):
        raise HypothesisError("Pc and Mc must be causal")
    pair = tm_block([[Pc], [Mc]])
    image = tm_block([[z_minus(phi.A), TransferMatrix.constant(-phi.B)]]) @ pair
    residual = point_residual(phi.stacked @ image, pair)
    certified = None
    if certify:
        try:
            s = image.inverse() * Z_INV
            c = s.cancel().classify()
            certified = c.all_stable_proper and c.all_strictly_proper
        except SingularError:
            certified = False
    return SeparationReport(satisfied=residual <= tol, residual=residual, certified=certified)
