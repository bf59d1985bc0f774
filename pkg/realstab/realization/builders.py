import numpy as np

from .base import Realization
from .signals import SignalSpace
from ..exceptions import DimensionError
from ..tfmat import TransferMatrix, tm_block, shift_block, z_minus, state_space_tf
from ..utilities import as_matrix

__all__ = ['plant_controller_realization', 'state_feedback_realization', 'output_feedback_realization',
           'generalized_realization', 'state_feedback_iop_transform', 'output_feedback_iop_transform']


def _expect(m: TransferMatrix, shape, name):
    if m.shape != tuple(shape):
        raise DimensionError(f"{name} must be {shape[0]}x{shape[1]}, got {m.shape[0]}x{m.shape[1]}")


def plant_controller_realization(G, K) -> Realization:
    """
    y = G u + d_y, u = K y + d_u over signals [y, u]
    """
    G, K = TransferMatrix.coerce(G), TransferMatrix.coerce(K)
    p, m = G.shape
    _expect(K, (m, p), 'K')
    space = SignalSpace.of(('y', p), ('u', m))
    return Realization.from_blocks(space, {('y', 'u'): G, ('u', 'y'): K})


def _state_matrices(A, B):
    A, B = as_matrix(A, 'A'), as_matrix(B, 'B')
    if A.shape[0] != A.shape[1] or B.shape[0] != A.shape[0]:
        raise DimensionError(f"A must be square with as many rows as B, got A{A.shape} B{B.shape}")
    return A, B


def state_feedback_realization(A, B, K) -> Realization:
    """
    x = (A + (1 - z)I) x + B u + d_x, u = K x + d_u over signals [x, u];
    the x row is z x = A x + B u + d_x rearranged.
    """
    A, B = _state_matrices(A, B)
    n, m = B.shape
    K = TransferMatrix.coerce(K)
    _expect(K, (m, n), 'K')
    space = SignalSpace.of(('x', n), ('u', m))
    return Realization.from_blocks(space, {('x', 'x'): shift_block(A), ('x', 'u'): B, ('u', 'x'): K})


def output_feedback_realization(A, B, C, D, K) -> Realization:
    """Plant (A, B, C, D) with output feedback u = K y over signals [x, u, y]"""
    A, B = _state_matrices(A, B)
    n, m = B.shape
    C = as_matrix(C, 'C')
    p = C.shape[0]
    D = np.zeros((p, m)) if D is None else as_matrix(D, 'D')
    if C.shape[1] != n or D.shape != (p, m):
        raise DimensionError(f"inconsistent plant shapes A{A.shape} B{B.shape} C{C.shape} D{D.shape}")
    K = TransferMatrix.coerce(K)
    _expect(K, (m, p), 'K')
    space = SignalSpace.of(('x', n), ('u', m), ('y', p))
    return Realization.from_blocks(space, {('x', 'x'): shift_block(A), ('x', 'u'): B, ('u', 'y'): K,
                                           ('y', 'x'): C, ('y', 'u'): D})


def generalized_realization(G, Pyw, Pzu, Pzw, K) -> Realization:
    """
    Generalized plant with measured output y, control u, performance output z and exogenous
    input w over signals [y, u, z, w]. Plant and controller enter with negative sign.
    """
    G, Pyw, Pzu, Pzw, K = (TransferMatrix.coerce(x) for x in (G, Pyw, Pzu, Pzw, K))
    p, m = G.shape
    nz, nw = Pzu.rows, Pyw.cols
    _expect(Pyw, (p, nw), 'P_yw')
    _expect(Pzu, (nz, m), 'P_zu')
    _expect(Pzw, (nz, nw), 'P_zw')
    _expect(K, (m, p), 'K')
    space = SignalSpace.of(('y', p), ('u', m), ('z', nz), ('w', nw))
    return Realization.from_blocks(space, {('y', 'u'): -G, ('y', 'w'): -Pyw, ('u', 'y'): -K,
                                           ('z', 'u'): -Pzu, ('z', 'w'): -Pzw})


def state_feedback_iop_transform(A, m: int) -> TransferMatrix:
    """T = diag(zI - A, I_m): maps the state-feedback realization to plant/controller form"""
    return TransferMatrix.diag(z_minus(A), TransferMatrix.identity(m))


def output_feedback_iop_transform(A, C, m: int) -> TransferMatrix:
    """T = [[I, 0, 0], [0, I, 0], [-C(zI - A)^-1, 0, I]] over signals [x, u, y]"""
    A, C = as_matrix(A, 'A'), as_matrix(C, 'C')
    n, p = A.shape[0], C.shape[0]
    CR = state_space_tf(A, np.eye(n), C)
    return tm_block([[TransferMatrix.identity(n), None, None],
                     [None, TransferMatrix.identity(m), None],
                     [-CR, None, TransferMatrix.identity(p)]])
