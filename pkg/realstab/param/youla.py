from numbers import Number

from .coprime import CoprimeFactors
from ..exceptions import NotStableError, DimensionError
from ..realization import plant_controller_realization, check_internal
from ..tfmat import TransferMatrix

__all__ = ['youla_controller', 'youla_parameter', 'dual_youla_plant']


def _parameter(cf: CoprimeFactors, Q) -> TransferMatrix:
    m, p = cf.Vr.shape
    if Q is None or (isinstance(Q, Number) and Q == 0):
        return TransferMatrix.zeros(m, p)
    Q = TransferMatrix.coerce(Q)
    if Q.shape != (m, p):
        raise DimensionError(f"Youla parameter must be {m}x{p}, got {Q.shape}")
    return Q


def youla_controller(cf: CoprimeFactors, Q=None) -> TransferMatrix:
    """K = (Vr - Mr Q)(Ur - Nr Q)^-1"""
    Q = _parameter(cf, Q)
    classification = Q.classify()
    if not classification.all_stable_proper:
        raise NotStableError("Youla parameter must be stable and proper", entries=classification.unstable_entries())
    return ((cf.Vr - cf.Mr @ Q) @ (cf.Ur - cf.Nr @ Q).inverse()).cancel()


def youla_parameter(cf: CoprimeFactors, K) -> TransferMatrix:
    """
    The parameter of an internally stabilizing K: Q = Mr^-1 (Vr - U Ml^-1) where U is the
    u <- d_y block of the plant/controller stability matrix.
    """
    K = TransferMatrix.coerce(K)
    loop = plant_controller_realization(cf.G, K)
    report = check_internal(loop)
    if not report.internally_stable:
        raise NotStableError(f"controller is not internally stabilizing ({report.verdict})",
                             witness=[[p.real, p.imag] for p in report.witness])
    U = report.S.take(loop.space.indices('u'), loop.space.indices('y'))
    return (cf.Mr.inverse() @ (cf.Vr - U @ cf.Ml.inverse())).cancel()


def dual_youla_plant(cf: CoprimeFactors, P) -> TransferMatrix:
    """
    Plants stabilized by the central controller Vr Ur^-1: G(P) = (Nr - Ur P)(Mr - Vr P)^-1
    with P stable and proper.
    """
    p, m = cf.Nr.shape
    P = TransferMatrix.coerce(P)
    if P.shape != (p, m):
        raise DimensionError(f"dual Youla parameter must be {p}x{m}, got {P.shape}")
    return ((cf.Nr - cf.Ur @ P) @ (cf.Mr - cf.Vr @ P).inverse()).cancel()
