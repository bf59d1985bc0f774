from .additive import RobustReport, stability_report, ill_posed_report, _well_posed_inverse
from ..exceptions import IllPosedError, DimensionError, NotStableError
from ..tfmat import TransferMatrix, tm_block
from ..utilities import point_residual

__all__ = ['youla_dual_check']


def youla_dual_check(P, Q) -> RobustReport:
    """
    Loop of a dual Youla parameter P and a primal parameter Q, realized by R = [[0, -P], [-Q, 0]].
    The verdict is stability of (I - QP)^-1, which is sufficient; the full block inverse
    [[I, P], [Q, I]]^-1 is reported alongside as `block_stable`.
    """
    P, Q = TransferMatrix.coerce(P), TransferMatrix.coerce(Q)
    if Q.shape != (P.cols, P.rows):
        raise DimensionError(f"Q must be {P.cols}x{P.rows} to close a loop with P {P.shape}, got {Q.shape}")
    for name, m in (('P', P), ('Q', Q)):
        if not m.classify().all_stable_proper:
            raise NotStableError(f"{name} must be stable and proper")
    a, b = P.shape
    details = {}
    try:
        block = _well_posed_inverse(tm_block([[TransferMatrix.identity(a), P], [Q, TransferMatrix.identity(b)]]))
        details['block_stable'] = block.classify().all_stable_proper
    except IllPosedError:
        details['block_stable'] = False
    try:
        reduced = _well_posed_inverse(TransferMatrix.identity(b) - Q @ P)
        mirrored = _well_posed_inverse(TransferMatrix.identity(a) - P @ Q)
    except IllPosedError as e:
        return ill_posed_report(e, details=details)
    # (I - PQ)^-1 = I + P (I - QP)^-1 Q
    details['identity_residual'] = point_residual(mirrored, TransferMatrix.identity(a) + P @ reduced @ Q)
    return stability_report(reduced, details=details)
