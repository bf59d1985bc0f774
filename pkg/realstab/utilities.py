import logging
import time
from contextlib import contextmanager
from typing import Iterable, List, Sequence

import numpy as np
import textdistance
import xxhash

# generic points outside the closed unit disk used for identity residuals
RESIDUAL_POINTS = (2.0 + 0j, 3.0 + 0j, 5j, 1.5 * np.exp(1j * np.pi / 3))
# points used to decide whether a rational entry is numerically zero
SINGULARITY_POINTS = (2.0 + 0j, 3.0 + 0j, 5j)


@contextmanager
def logtime(name):
    start = time.perf_counter()
    yield
    logging.info(f"{name} took {time.perf_counter() - start: .3f} seconds")


def as_matrix(x, name='matrix') -> np.ndarray:
    """
    Returns `x` as a 2D float array. Scalars become 1x1; vectors are ambiguous and rejected.
    """
    a = np.asarray(x, dtype=float)
    if a.ndim == 0 or a.size == 1:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        raise ValueError(f"{name} is a vector of length {a.size}; give it as a nested list so its orientation is explicit")
    if a.ndim != 2:
        raise ValueError(f"{name} must be at most 2-dimensional, got shape {a.shape}")
    return a


def evaluate(x, z0) -> np.ndarray:
    """Value of a transfer matrix, array or scalar at the point z0"""
    if hasattr(x, 'evaluate'):
        return np.asarray(x.evaluate(z0), dtype=complex)
    return np.atleast_2d(np.asarray(x, dtype=complex))


def point_residual(lhs, rhs=None, points: Iterable[complex] = RESIDUAL_POINTS) -> float:
    """
    max over residual points of the Frobenius norm of lhs(z0) - rhs(z0).
    `rhs` of None means zero.
    """
    worst = 0.
    for z0 in points:
        a = evaluate(lhs, z0)
        b = 0 if rhs is None else evaluate(rhs, z0)
        worst = max(worst, float(np.linalg.norm(a - b)))
    return worst


def identity_residual(product, points: Iterable[complex] = RESIDUAL_POINTS) -> float:
    n = product.shape[0]
    return point_residual(product, np.eye(n), points)


def suggest(guess: str, choices: Sequence[str], n=3) -> List[str]:
    inorder = sorted(choices, key=lambda x: textdistance.jaro_winkler(guess, x), reverse=True)
    return list(inorder[:n])


def digest(text: str) -> str:
    digester = xxhash.xxh64()
    digester.update(text.encode('utf-8'))
    return digester.hexdigest()


def hash_dataframe(df) -> str:
    digester = xxhash.xxh64()
    for i in df.astype(str).values.ravel():
        digester.update(i)
    return digester.hexdigest()
