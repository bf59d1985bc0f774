"""
Mixed parameterizations of the output-feedback loop: blocks of its stability matrix that
mix state and output signals, the affine identities they satisfy and controller recovery.
"""
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from .plant import StateSpacePlant
from ..exceptions import NotStableError
from ..realization import check_internal
from ..tfmat import TransferMatrix
from ..utilities import RESIDUAL_POINTS, point_residual

__all__ = ['MixedParameterization', 'mixed_extract', 'FLAVORS']

# flavor -> (row signals, column signals) of the 2x2 block matrix read from S
FLAVORS = {
    'output-rows': (('y', 'u'), ('x', 'y')),
    'state-rows': (('x', 'u'), ('y', 'u')),
}


@dataclass(frozen=True, eq=False)
class MixedParameterization:
    flavor: str
    blocks: Dict[str, TransferMatrix]
    residuals: Tuple[float, float]
    controller: TransferMatrix
    controller_residual: float

    @property
    def matrix(self) -> List[List[TransferMatrix]]:
        rows, cols = FLAVORS[self.flavor]
        return [[self.blocks[f"{a}{b}"] for b in cols] for a in rows]


def _residuals(flavor: str, plant: StateSpacePlant, blocks, points=RESIDUAL_POINTS):
    A, B, C = plant.A, plant.B, plant.C
    n, m, p = plant.states, plant.inputs, plant.outputs
    left, right = 0., 0.
    for z0 in points:
        v = {k: b.evaluate(z0) for k, b in blocks.items()}
        za = z0 * np.eye(n) - A
        g = plant.G.evaluate(z0)
        if flavor == 'output-rows':
            phi = np.block([[v['yx'], v['yy']], [v['ux'], v['uy']]])
            # [I, -G] Phi = [C(zI - A)^-1, I] and Phi [zI - A; -C] = 0
            target = np.hstack([C @ np.linalg.inv(za), np.eye(p)])
            left = max(left, np.linalg.norm(np.hstack([np.eye(p), -g]) @ phi - target))
            right = max(right, np.linalg.norm(phi @ np.vstack([za, -C])))
        else:
            phi = np.block([[v['xy'], v['xu']], [v['uy'], v['uu']]])
            # [zI - A, -B] Phi = 0 and Phi [-G; I] = [(zI - A)^-1 B; I]
            target = np.vstack([np.linalg.solve(za, B), np.eye(m)])
            left = max(left, np.linalg.norm(np.hstack([za, -B]) @ phi))
            right = max(right, np.linalg.norm(phi @ np.vstack([-g, np.eye(m)]) - target))
    return float(left), float(right)


def mixed_extract(plant: StateSpacePlant, K, flavor: str) -> MixedParameterization:
    """
    output-rows reads {yx, yy, ux, uy} from S and recovers K = S_uy S_yy^-1;
    state-rows reads {xy, xu, uy, uu} and recovers K = S_uu^-1 S_uy.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"Unknown flavor `{flavor}`, expected one of {list(FLAVORS)}")
    K = TransferMatrix.coerce(K)
    loop = plant.output_feedback(K)
    report = check_internal(loop)
    if not report.internally_stable:
        raise NotStableError(f"output-feedback loop is not internally stable ({report.verdict})",
                             entries=report.unstable_entries)
    rows, cols = FLAVORS[flavor]
    idx = loop.space.indices
    blocks = {f"{a}{b}": report.S.take(idx(a), idx(b)) for a in rows for b in cols}
    if flavor == 'output-rows':
        recovered = blocks['uy'] @ blocks['yy'].inverse()
    else:
        recovered = blocks['uu'].inverse() @ blocks['uy']
    recovered = recovered.cancel()
    return MixedParameterization(flavor, blocks, _residuals(flavor, plant, blocks), recovered,
                                 point_residual(recovered, K))
