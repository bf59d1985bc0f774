import numpy as np
from hypothesis import given, settings

from realstab.ratcore import Polynomial, RationalFunction
from realstab.tfmat import (TransferMatrix, characteristic_polynomial, resolvent, state_space_tf, shift_block,
                            z_minus, tm_inverse)
from realstab.tfmat.tests.strategies import schur_matrices
from realstab.utilities import identity_residual, point_residual


def test_characteristic_polynomial():
    A = np.array([[0.5, 1.], [0., 0.2]])
    assert characteristic_polynomial(A).allclose(Polynomial([0.1, -0.7, 1.]))


def test_blocks():
    A = np.array([[0.5, 1.], [0., 0.2]])
    assert z_minus(A)[0, 1] == RationalFunction.constant(-1.)
    assert z_minus(A)[1, 1] == RationalFunction([-0.2, 1.])
    assert shift_block(A)[0, 0] == RationalFunction([1.5, -1.])


def test_scalar_state_space(lag):
    assert state_space_tf(0.5, 1., 1.)[0, 0].isclose(lag)
    assert state_space_tf(0.5, 1., 1., 2.)[0, 0].isclose(lag + 2.)


@settings(max_examples=30, deadline=None)
@given(schur_matrices())
def test_resolvent_inverts_shift(A):
    assert identity_residual(resolvent(A) @ z_minus(A)) < 1e-8


def test_large_resolvent_uses_elimination():
    A = np.diag([0.1, 0.2, 0.3, 0.4, 0.5]) + np.diag([0.1] * 4, k=1)
    R = resolvent(A)
    assert identity_residual(z_minus(A) @ R) < 1e-8
    assert R.classify().all_strictly_proper


def test_state_space_matches_resolvent():
    A = np.array([[0.2, 0.5], [-0.3, 0.1]])
    B = np.array([[1.], [0.5]])
    C = np.array([[1., -1.]])
    G = state_space_tf(A, B, C)
    expected = TransferMatrix.constant(C) @ tm_inverse(z_minus(A)) @ TransferMatrix.constant(B)
    assert point_residual(G, expected) < 1e-10
    assert G.classify().all_stable_proper
