from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..exceptions import NotStableError, DimensionError
from ..realization import Realization, check_internal
from ..tfmat import TransferMatrix
from ..utilities import RESIDUAL_POINTS, point_residual

__all__ = ['GeneralizedResponse', 'gsls_extract']

ROWS, COLS = ('y', 'u', 'z'), ('y', 'u', 'w')


@dataclass(frozen=True, eq=False)
class GeneralizedResponse:
    """
    Psi: rows (y, u, z), columns (y, u, w) of the stability matrix of a generalized plant loop
    """
    psi: TransferMatrix
    blocks: Dict[str, TransferMatrix]
    residuals: Tuple[float, float]
    pattern_residual: float
    controller: TransferMatrix
    controller_residual: float

    def block(self, a: str, b: str) -> TransferMatrix:
        return self.blocks[f"{a}{b}"]


def gsls_extract(r: Realization) -> GeneralizedResponse:
    """
    Psi from a realization built by `generalized_realization`. Checks that the z-column of S is
    e_z and the w-row is e_w', the two affine identities of Psi, and recovers K = -Psi_uy Psi_yy^-1.
    """
    if r.space.names != ['y', 'u', 'z', 'w']:
        raise DimensionError(f"expected signals [y, u, z, w], got {r.space.names}")
    report = check_internal(r)
    if not report.internally_stable:
        raise NotStableError(f"generalized loop is not internally stable ({report.verdict})",
                             entries=report.unstable_entries)
    S, idx, n = report.S, r.space.indices, r.space.total
    psi = S.take(idx(ROWS), idx(COLS))
    blocks = {f"{a}{b}": S.take(idx(a), idx(b)) for a in ROWS for b in COLS}
    e_w = np.zeros((r.space.dim('w'), n))
    e_w[:, idx('w')] = np.eye(r.space.dim('w'))
    pattern = max(point_residual(r.columns(S, 'z'), r.space.selector('z')),
                  point_residual(S.take(idx('w'), np.arange(n)), e_w))

    G, Pyw, Pzu, Pzw = (-r.block(a, b) for a, b in (('y', 'u'), ('y', 'w'), ('z', 'u'), ('z', 'w')))
    K = -r.block('u', 'y')
    p, m = G.shape
    nz, nw = Pzw.shape
    left, right = 0., 0.
    for z0 in RESIDUAL_POINTS:
        v = psi.evaluate(z0)
        g, yw, zu, zw = (x.evaluate(z0) for x in (G, Pyw, Pzu, Pzw))
        # Psi [[G, Pyw], [I, 0], [0, I]] = [[0, 0], [I, 0], [-Pzu, -Pzw]]
        inner = np.block([[g, yw], [np.eye(m), np.zeros((m, nw))], [np.zeros((nw, m)), np.eye(nw)]])
        target = np.block([[np.zeros((p, m)), np.zeros((p, nw))], [np.eye(m), np.zeros((m, nw))], [-zu, -zw]])
        left = max(left, np.linalg.norm(v @ inner - target))
        # [[I, G, 0], [0, Pzu, I]] Psi = [[I, 0, -Pyw], [0, 0, -Pzw]]
        outer = np.block([[np.eye(p), g, np.zeros((p, nz))], [np.zeros((nz, p)), zu, np.eye(nz)]])
        target = np.block([[np.eye(p), np.zeros((p, m)), -yw], [np.zeros((nz, p)), np.zeros((nz, m)), -zw]])
        right = max(right, np.linalg.norm(outer @ v - target))
    recovered = (-(blocks['uy'] @ blocks['yy'].inverse())).cancel()
    return GeneralizedResponse(psi, blocks, (float(left), float(right)), pattern, recovered,
                               point_residual(recovered, K))
