from .coprime import CoprimeFactors
from .iop import IopQuadruple
from .youla import _parameter
from ..tfmat import TransferMatrix

__all__ = ['youla_iop_bridge']


def youla_iop_bridge(cf: CoprimeFactors, Q=None) -> IopQuadruple:
    """
    The closed-loop maps of the controller with Youla parameter Q, written in the factors:
    Y = (Ur - Nr Q) Ml, U = (Vr - Mr Q) Ml, W = (Ur - Nr Q) Nl, Z = I + (Vr - Mr Q) Nl
    """
    Q = _parameter(cf, Q)
    left = cf.Ur - cf.Nr @ Q
    right = cf.Vr - cf.Mr @ Q
    m = cf.Mr.rows
    return IopQuadruple(Y=(left @ cf.Ml).cancel(), U=(right @ cf.Ml).cancel(), W=(left @ cf.Nl).cancel(),
                        Z=(TransferMatrix.identity(m) + right @ cf.Nl).cancel(), G=cf.G)
