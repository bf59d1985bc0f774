from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..exceptions import DimensionError
from ..ratcore import poly_roots
from ..realization import output_feedback_realization, state_feedback_realization, Realization
from ..tfmat import TransferMatrix, characteristic_polynomial, resolvent, state_space_tf
from ..utilities import as_matrix

__all__ = ['StateSpacePlant', 'spectral_radius', 'characteristic_polynomial', 'resolvent', 'state_space_tf']


def spectral_radius(A) -> float:
    """Largest root modulus of det(zI - A), found with the toolkit's own root finder"""
    roots = poly_roots(characteristic_polynomial(A))
    return float(np.max(np.abs(roots))) if len(roots) else 0.


@dataclass(frozen=True, eq=False)
class StateSpacePlant:
    """x[t+1] = A x[t] + B u[t], y[t] = C x[t] + D u[t]; G = C(zI - A)^-1 B + D"""
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray = None

    def __post_init__(self):
        A, B, C = as_matrix(self.A, 'A'), as_matrix(self.B, 'B'), as_matrix(self.C, 'C')
        D = np.zeros((C.shape[0], B.shape[1])) if self.D is None else as_matrix(self.D, 'D')
        n = A.shape[0]
        if A.shape != (n, n) or B.shape[0] != n or C.shape[1] != n or D.shape != (C.shape[0], B.shape[1]):
            raise DimensionError(f"inconsistent plant shapes A{A.shape} B{B.shape} C{C.shape} D{D.shape}")
        for name, value in zip('ABCD', (A, B, C, D)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @classmethod
    def from_dict(cls, d: dict) -> 'StateSpacePlant':
        return cls(d['A'], d['B'], d['C'], d.get('D'))

    def to_dict(self):
        return {k: getattr(self, k).tolist() for k in 'ABCD'}

    @property
    def states(self) -> int:
        return self.A.shape[0]

    @property
    def inputs(self) -> int:
        return self.B.shape[1]

    @property
    def outputs(self) -> int:
        return self.C.shape[0]

    @property
    def strictly_proper(self) -> bool:
        return not np.any(self.D)

    @cached_property
    def G(self) -> TransferMatrix:
        return state_space_tf(self.A, self.B, self.C, self.D)

    @cached_property
    def resolvent(self) -> TransferMatrix:
        return resolvent(self.A)

    @property
    def spectral_radius(self) -> float:
        return spectral_radius(self.A)

    @property
    def schur_stable(self) -> bool:
        return self.spectral_radius < 1

    def state_feedback(self, K) -> Realization:
        return state_feedback_realization(self.A, self.B, K)

    def output_feedback(self, K) -> Realization:
        return output_feedback_realization(self.A, self.B, self.C, self.D, K)

    def __eq__(self, other):
        if not isinstance(other, StateSpacePlant):
            return NotImplemented
        return all(np.array_equal(getattr(self, k), getattr(other, k)) for k in 'ABCD')

    def __hash__(self):
        return hash(tuple(getattr(self, k).tobytes() for k in 'ABCD'))
