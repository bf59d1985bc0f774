"""
Doubly coprime factorization of a state-space plant from a stabilizing state-feedback gain F
and observer gain L:

    [[Ml, -Nl], [-Vl, Ul]] @ [[Ur, Nr], [Vr, Mr]] = I,   G = Ml^-1 Nl = Nr Mr^-1
"""
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .plant import StateSpacePlant
from .riccati import riccati_gain
from ..exceptions import DimensionError
from ..tfmat import TransferMatrix, state_space_tf
from ..utilities import RESIDUAL_POINTS, logtime, as_matrix

__all__ = ['CoprimeFactors', 'dcf', 'FACTOR_NAMES']

FACTOR_NAMES = ('Ml', 'Nl', 'Vl', 'Ul', 'Ur', 'Nr', 'Vr', 'Mr')


@dataclass(frozen=True, eq=False)
class CoprimeFactors:
    Ml: TransferMatrix
    Nl: TransferMatrix
    Vl: TransferMatrix
    Ul: TransferMatrix
    Ur: TransferMatrix
    Nr: TransferMatrix
    Vr: TransferMatrix
    Mr: TransferMatrix
    plant: StateSpacePlant = field(default=None, repr=False)
    F: np.ndarray = field(default=None, repr=False)
    L: np.ndarray = field(default=None, repr=False)

    @property
    def factors(self) -> Dict[str, TransferMatrix]:
        return {k: getattr(self, k) for k in FACTOR_NAMES}

    @property
    def G(self) -> TransferMatrix:
        if self.plant is not None:
            return self.plant.G
        return self.Nr @ self.Mr.inverse()

    def bezout_residual(self, points=RESIDUAL_POINTS) -> float:
        worst = 0.
        for z0 in points:
            v = {k: m.evaluate(z0) for k, m in self.factors.items()}
            left = np.block([[v['Ml'], -v['Nl']], [-v['Vl'], v['Ul']]])
            right = np.block([[v['Ur'], v['Nr']], [v['Vr'], v['Mr']]])
            worst = max(worst, np.linalg.norm(left @ right - np.eye(left.shape[0])))
        return float(worst)

    def plant_residual(self, points=RESIDUAL_POINTS) -> float:
        """max over residual points of |Ml^-1 Nl - G| and |Nr Mr^-1 - G|"""
        worst = 0.
        for z0 in points:
            g = self.G.evaluate(z0)
            left = np.linalg.solve(self.Ml.evaluate(z0), self.Nl.evaluate(z0))
            right = np.linalg.solve(self.Mr.evaluate(z0).T, self.Nr.evaluate(z0).T).T
            worst = max(worst, np.linalg.norm(left - g), np.linalg.norm(right - g))
        return float(worst)

    @property
    def all_stable(self) -> bool:
        return all(m.classify().all_stable_proper for m in self.factors.values())


def dcf(plant: StateSpacePlant, F=None, L=None, Q=None, R=None) -> CoprimeFactors:
    """
    Observer-based factors. Gains default to Riccati solutions with identity weights:
    F from (A, B) and L from the transposed problem (A', C').
    """
    A, B, C, D = plant.A, plant.B, plant.C, plant.D
    n, m, p = plant.states, plant.inputs, plant.outputs
    F = riccati_gain(A, B, Q, R) if F is None else as_matrix(F, 'F')
    L = riccati_gain(A.T, C.T).T if L is None else as_matrix(L, 'L')
    if F.shape != (m, n) or L.shape != (n, p):
        raise DimensionError(f"gains must be F {m}x{n} and L {n}x{p}, got F{F.shape} L{L.shape}")
    AF, AL = A + B @ F, A + L @ C
    CF, BL = C + D @ F, B + L @ D
    with logtime(f"coprime factorization of a {n}-state plant"):
        factors = dict(
            Mr=state_space_tf(AF, B, F, np.eye(m)),
            Nr=state_space_tf(AF, B, CF, D),
            Ur=state_space_tf(AF, -L, CF, np.eye(p)),
            Vr=state_space_tf(AF, -L, F, np.zeros((m, p))),
            Ml=state_space_tf(AL, L, C, np.eye(p)),
            Nl=state_space_tf(AL, BL, C, D),
            Vl=state_space_tf(AL, -L, F, np.zeros((m, p))),
            Ul=state_space_tf(AL, -BL, F, np.eye(m)),
        )
    return CoprimeFactors(plant=plant, F=F, L=L, **factors)
