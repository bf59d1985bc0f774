from dataclasses import dataclass

import numpy as np

from ..exceptions import NotStableError
from ..realization import plant_controller_realization, check_internal
from ..tfmat import TransferMatrix, tm_block
from ..utilities import RESIDUAL_POINTS

__all__ = ['IopQuadruple', 'iop_from_controller', 'controller_from_iop']


@dataclass(frozen=True, eq=False)
class IopQuadruple:
    """
    Closed-loop maps of y = G u + d_y, u = K y + d_u:
    [y; u] = [[Y, W], [U, Z]] [d_y; d_u]
    """
    Y: TransferMatrix
    U: TransferMatrix
    W: TransferMatrix
    Z: TransferMatrix
    G: TransferMatrix = None

    @property
    def S(self) -> TransferMatrix:
        return tm_block([[self.Y, self.W], [self.U, self.Z]])

    def identity_residuals(self, G=None, points=RESIDUAL_POINTS):
        """
        Residuals of [I, -G] S = [I, 0] and S [-G; I] = [0; I]
        """
        G = self.G if G is None else TransferMatrix.coerce(G)
        p, m = G.shape
        left, right = 0., 0.
        for z0 in points:
            g, s = G.evaluate(z0), self.S.evaluate(z0)
            left = max(left, np.linalg.norm(np.hstack([np.eye(p), -g]) @ s
                                            - np.hstack([np.eye(p), np.zeros((p, m))])))
            right = max(right, np.linalg.norm(s @ np.vstack([-g, np.eye(m)])
                                              - np.vstack([np.zeros((p, m)), np.eye(m)])))
        return float(left), float(right)

    @property
    def all_stable(self) -> bool:
        return self.S.classify().all_stable_proper


def iop_from_controller(G, K) -> IopQuadruple:
    G, K = TransferMatrix.coerce(G), TransferMatrix.coerce(K)
    loop = plant_controller_realization(G, K)
    report = check_internal(loop)
    if not report.internally_stable:
        raise NotStableError(f"plant/controller loop is not internally stable ({report.verdict})",
                             entries=report.unstable_entries)
    (Y, W), (U, Z) = report.S.split(loop.space.dims, loop.space.dims)
    return IopQuadruple(Y=Y, U=U, W=W, Z=Z, G=G)


def controller_from_iop(q: IopQuadruple) -> TransferMatrix:
    """K = U Y^-1"""
    return (q.U @ q.Y.inverse()).cancel()
