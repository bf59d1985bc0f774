"""
Transfer matrices built from state-space data: zI - A, (zI - A)^-1 and C(zI - A)^-1 B + D.
For n <= 4 the resolvent is expanded through the adjugate (Faddeev-LeVerrier); larger
systems go through rational Gaussian elimination.
"""
from typing import List, Tuple

import numpy as np

from .matrix import TransferMatrix, tm_inverse
from ..exceptions import DimensionError
from ..ratcore import RationalFunction, Polynomial
from ..utilities import as_matrix

__all__ = ['characteristic_polynomial', 'resolvent', 'state_space_tf', 'shift_block', 'z_minus']

ADJUGATE_MAX_ORDER = 4


def _square(A, name='A') -> np.ndarray:
    A = as_matrix(A, name)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got {A.shape}")
    return A


def faddeev_leverrier(A) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    Returns (c, [M_1..M_n]) with det(zI - A) = sum_k c[k] z^k and
    adj(zI - A) = sum_k M_k z^(n-k).
    """
    A = _square(A)
    n = A.shape[0]
    c = np.zeros(n + 1)
    c[n] = 1.
    M = np.zeros_like(A)
    Ms = []
    for k in range(1, n + 1):
        M = A @ M + c[n - k + 1] * np.eye(n)
        Ms.append(M)
        c[n - k] = -np.trace(A @ M) / k
    return c, Ms


def characteristic_polynomial(A) -> Polynomial:
    return Polynomial(faddeev_leverrier(A)[0])


def z_minus(A) -> TransferMatrix:
    """zI - A"""
    A = _square(A)
    n = A.shape[0]
    entries = [[RationalFunction([-A[i, j], 1.] if i == j else [-A[i, j]], cancel=False) for j in range(n)]
               for i in range(n)]
    return TransferMatrix(entries)


def shift_block(A) -> TransferMatrix:
    """A + (1 - z)I, the diagonal block of a state signal"""
    A = _square(A)
    n = A.shape[0]
    entries = [[RationalFunction([A[i, j] + 1., -1.] if i == j else [A[i, j]], cancel=False) for j in range(n)]
               for i in range(n)]
    return TransferMatrix(entries)


def _adjugate_tf(A, left: np.ndarray, right: np.ndarray, feedthrough: np.ndarray) -> TransferMatrix:
    c, Ms = faddeev_leverrier(A)
    n = A.shape[0]
    den = Polynomial(c)
    eig = np.linalg.eigvals(A)
    rows, cols = left.shape[0], right.shape[1]
    # numerator coefficient of z^(n-k) is left @ M_k @ right
    stacked = np.stack([left @ Ms[n - 1 - p] @ right for p in range(n)])  # index p is the power of z
    entries = []
    for i in range(rows):
        row = []
        for j in range(cols):
            num = Polynomial(stacked[:, i, j]) + den * feedthrough[i, j]
            row.append(RationalFunction(num, den, den_roots=eig))
        entries.append(row)
    return TransferMatrix(entries)


def resolvent(A) -> TransferMatrix:
    """(zI - A)^-1"""
    A = _square(A)
    n = A.shape[0]
    if n <= ADJUGATE_MAX_ORDER:
        return _adjugate_tf(A, np.eye(n), np.eye(n), np.zeros((n, n)))
    return tm_inverse(z_minus(A))


def state_space_tf(A, B, C, D=None) -> TransferMatrix:
    """C(zI - A)^-1 B + D"""
    A = _square(A)
    B, C = as_matrix(B, 'B'), as_matrix(C, 'C')
    n = A.shape[0]
    D = np.zeros((C.shape[0], B.shape[1])) if D is None else as_matrix(D, 'D')
    if B.shape[0] != n or C.shape[1] != n or D.shape != (C.shape[0], B.shape[1]):
        raise DimensionError(f"inconsistent state-space shapes A{A.shape} B{B.shape} C{C.shape} D{D.shape}")
    if n <= ADJUGATE_MAX_ORDER:
        return _adjugate_tf(A, C, B, D)
    return TransferMatrix.constant(C) @ resolvent(A) @ TransferMatrix.constant(B) + TransferMatrix.constant(D)
