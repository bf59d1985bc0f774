from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .matrix import TransferMatrix
from ..exceptions import ImproperError, DimensionError
from ..ratcore import RationalFunction, Polynomial

__all__ = ['ImpulseSequence', 'tm_impulse', 'tm_from_fir', 'entry_impulse']


@dataclass(frozen=True)
class ImpulseSequence:
    """
    Markov coefficients of a transfer matrix: coefficients[tau] multiplies z**-tau.
    """
    coefficients: np.ndarray  # (horizon + 1, rows, cols)

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.ndim == 1:
            c = c[:, None, None]
        if c.ndim != 3:
            raise DimensionError(f"impulse coefficients must be a (horizon+1, rows, cols) array, got {c.shape}")
        object.__setattr__(self, 'coefficients', c)

    @classmethod
    def from_taps(cls, taps) -> 'ImpulseSequence':
        return cls(np.stack([np.atleast_2d(np.asarray(t, dtype=float)) for t in taps]))

    @property
    def horizon(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def shape(self):
        return self.coefficients.shape[1:]

    def __getitem__(self, tau) -> np.ndarray:
        return self.coefficients[tau]

    def __len__(self):
        return self.coefficients.shape[0]

    def __add__(self, other: 'ImpulseSequence') -> 'ImpulseSequence':
        h = min(self.horizon, other.horizon)
        return ImpulseSequence(self.coefficients[:h + 1] + other.coefficients[:h + 1])

    def truncate(self, horizon: int) -> 'ImpulseSequence':
        return ImpulseSequence(self.coefficients[:horizon + 1])

    def convolve(self, other: 'ImpulseSequence') -> 'ImpulseSequence':
        """Coefficients of the product of the two transfer matrices, up to the shorter horizon"""
        h = min(self.horizon, other.horizon)
        out = np.zeros((h + 1, self.shape[0], other.shape[1]))
        for t in range(h + 1):
            for s in range(t + 1):
                out[t] += self.coefficients[s] @ other.coefficients[t - s]
        return ImpulseSequence(out)


def entry_impulse(r: RationalFunction, horizon: int) -> np.ndarray:
    if not r.proper:
        raise ImproperError(f"{r} is improper and has no impulse response")
    if r.is_zero:
        return np.zeros(horizon + 1)
    n = int(r.den.degree)
    b = np.zeros(n + 1)
    b[:len(r.num.coeffs)] = r.num.coeffs
    impulse = np.zeros(horizon + 1)
    impulse[0] = 1.
    # ascending coefficients in z reversed are ascending coefficients in 1/z
    return lfilter(b[::-1], r.den.coeffs[::-1], impulse)


def tm_impulse(m, horizon: int) -> ImpulseSequence:
    m = TransferMatrix.coerce(m)
    if horizon < 0:
        raise ValueError(f"horizon must be non-negative, got {horizon}")
    improper = m.classify().improper_entries()
    if improper:
        raise ImproperError(f"impulse coefficients need proper entries; improper at {improper}", entries=improper)
    out = np.zeros((horizon + 1,) + m.shape)
    for (i, j), e in np.ndenumerate(m.entries):
        out[:, i, j] = entry_impulse(e, horizon)
    return ImpulseSequence(out)


def tm_from_fir(seq: ImpulseSequence) -> TransferMatrix:
    """sum_tau coefficients[tau] z**-tau, each entry written as num / z**horizon"""
    if not isinstance(seq, ImpulseSequence):
        seq = ImpulseSequence(seq)
    h = seq.horizon
    den = Polynomial.monomial(h)
    rows, cols = seq.shape
    entries = [[RationalFunction(seq.coefficients[::-1, i, j], den) for j in range(cols)] for i in range(rows)]
    return TransferMatrix(entries)
