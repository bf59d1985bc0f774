"""
Seeded Monte-Carlo sweeps over sampled perturbations. Sample i always draws from
default_rng([seed, i]), so results do not depend on evaluation order. Sweeps are evidence,
not proof.
"""
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np
from tqdm import tqdm

from .additive import robust_check
from .perturbation import Perturbation
from ..tfmat import TransferMatrix
from ..utilities import logtime

__all__ = ['SweepEvidence', 'monte_carlo', 'sample_ball', 'small_gain_sweep']


@dataclass(frozen=True)
class SweepEvidence:
    samples: int
    passed: int
    seed: int
    failures: List[int] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return self.passed == self.samples


def sample_ball(rng: np.random.Generator, shape: Tuple[int, int], radius: float, aligned: np.ndarray = None) -> np.ndarray:
    """
    Constant matrix with spectral norm `radius`: a random direction, or the rank-one
    v u' / |.| when `aligned` is a matrix whose top singular pair it should match
    """
    if aligned is not None:
        u, _, vh = np.linalg.svd(np.atleast_2d(aligned))
        direction = np.real(np.outer(vh[0].conj(), u[:, 0].conj()))
    else:
        direction = rng.standard_normal(shape)
    top = np.linalg.norm(direction, 2)
    return np.zeros(shape) if top == 0 else radius * direction / top


def monte_carlo(check: Callable[[np.random.Generator], bool], samples: int = 100, seed: int = 42,
                description: str = 'samples', progress: bool = False) -> SweepEvidence:
    failures = []
    with logtime(f"sweep over {samples} {description}"):
        for i in tqdm(range(samples), desc=description, disable=not progress):
            if not check(np.random.default_rng([seed, i])):
                failures.append(i)
    return SweepEvidence(samples=samples, passed=samples - len(failures), seed=seed, failures=failures)


def small_gain_sweep(S_hat, space, block, margin: float, fraction: float = 0.99, samples: int = 100,
                     seed: int = 42, progress: bool = False) -> SweepEvidence:
    """robust_check over constant perturbations of `block` with norm fraction * margin"""
    a, b = block
    shape = (space.dim(a), space.dim(b))

    def check(rng):
        delta = Perturbation.from_blocks(space, {(a, b): TransferMatrix.constant(sample_ball(rng, shape, fraction * margin))})
        return robust_check(S_hat, delta).stable

    return monte_carlo(check, samples, seed, description=f"perturbations of {a}<-{b}", progress=progress)
