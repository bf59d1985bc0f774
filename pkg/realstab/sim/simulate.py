import logging
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np
import pandas as pd

from .program import RealizationProgram, compile_realization
from ..exceptions import DimensionError, NotStableError
from ..realization import Realization, SignalSpace, check_internal
from ..tfmat import tm_impulse
from ..utilities import hash_dataframe, logtime

__all__ = ['SimTrace', 'ImpulseMatch', 'simulate', 'impulse_match', 'disturbance_array']

Disturbance = Union[np.ndarray, Mapping[str, np.ndarray], pd.DataFrame, None]


@dataclass(frozen=True, eq=False)
class SimTrace:
    """eta[t] for t = 0..steps-1, stored as a (steps, total) array over `space`"""
    space: SignalSpace
    values: np.ndarray

    @property
    def steps(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.values[:, self.space.slice(name)]

    def signals(self):
        return {name: self[name] for name in self.space.names}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, columns=self.space.labels())

    def digest(self) -> str:
        return hash_dataframe(self.to_frame().round(12))

    def max_deviation(self, other: 'SimTrace', names: Sequence[str] = None) -> float:
        names = self.space.names if names is None else list(names)
        steps = min(self.steps, other.steps)
        worst = 0.
        for name in names:
            a, b = self[name][:steps], other[name][:steps]
            if a.shape != b.shape:
                raise DimensionError(f"signal `{name}` has shape {a.shape[1:]} in one trace and {b.shape[1:]} in the other")
            if a.size:
                worst = max(worst, float(np.max(np.abs(a - b))))
        return worst


@dataclass(frozen=True)
class ImpulseMatch:
    matched: bool
    max_deviation: float
    horizon: int


def disturbance_array(space: SignalSpace, d: Disturbance, steps: int = None) -> np.ndarray:
    """
    A (steps, total) array from an array, a {signal: series} mapping or a frame with
    `name[i]` columns. Missing signals and missing trailing steps are zero.
    """
    if d is None:
        if steps is None:
            raise ValueError("steps must be given when there is no disturbance")
        return np.zeros((steps, space.total))
    if isinstance(d, pd.DataFrame):
        unknown = set(d.columns) - set(space.labels())
        if unknown:
            raise DimensionError(f"disturbance columns {sorted(unknown)} are not signals of {space}")
        d = d.reindex(columns=space.labels(), fill_value=0.).to_numpy(dtype=float)
    elif isinstance(d, Mapping):
        length = max((len(v) for v in d.values()), default=0) if steps is None else steps
        out = np.zeros((length, space.total))
        for name, series in d.items():
            series = np.asarray(series, dtype=float)
            if series.ndim == 1:
                series = series[:, None]
            if series.shape[1] != space.dim(name):
                raise DimensionError(f"disturbance on `{name}` has width {series.shape[1]}, expected {space.dim(name)}")
            n = min(length, series.shape[0])
            out[:n, space.slice(name)] = series[:n]
        d = out
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[1] != space.total:
        raise DimensionError(f"disturbance must be a (steps, {space.total}) array, got shape {d.shape}")
    if steps is None:
        return d
    if d.shape[0] >= steps:
        return d[:steps]
    return np.vstack([d, np.zeros((steps - d.shape[0], space.total))])


def simulate(p: Union[RealizationProgram, Realization], d: Disturbance = None, steps: int = None) -> SimTrace:
    """
    Runs eta = R eta + d forward in time from zero initial conditions.
    """
    if isinstance(p, Realization):
        p = compile_realization(p)
    d = disturbance_array(p.space, d, steps)
    steps, total = d.shape
    F = p.feedthrough
    memories = [np.zeros(f.order) for f in p.filters]
    states = [np.zeros(len(s.rows)) for s in p.states]
    state_rows = np.concatenate([s.rows for s in p.states]) if p.states else np.empty(0, dtype=int)
    alg = p.algebraic
    out = np.zeros((steps, total))
    for t in range(steps):
        eta = np.zeros(total)
        for s, x in zip(p.states, states):
            eta[s.rows] = x
        known = d[t].copy()
        for f, m in zip(p.filters, memories):
            if f.order:
                known[f.row] += m[0]
        if state_rows.size:
            known += F[:, state_rows] @ eta[state_rows]
        if p.order is not None:
            for i in p.order:
                eta[i] = known[i] + F[i, alg] @ eta[alg]
        elif alg.size:
            eta[alg] = p.loop_inverse @ known[alg]
        rest = np.zeros(total)
        for k, f in enumerate(p.filters):
            x = eta[f.col]
            m = memories[k]
            y = f.b[0] * x + (m[0] if f.order else 0.)
            if f.order:
                shifted = np.append(m[1:], 0.)
                memories[k] = shifted + f.b[1:] * x - f.a[1:] * y
            rest[f.row] += y
        for k, s in enumerate(p.states):
            states[k] = s.inverse_lead @ (s.drift @ eta[s.rows] + rest[s.rows] + d[t, s.rows])
        out[t] = eta
    if not np.all(np.isfinite(out)):
        logging.warning("simulation produced non-finite values; the diagram is likely unstable")
    return SimTrace(p.space, out)


def impulse_match(r: Realization, horizon: int = 50, tol: float = 1e-8) -> ImpulseMatch:
    """
    Simulated unit-impulse responses of every disturbance channel against the impulse
    coefficients of the stability matrix
    """
    report = check_internal(r)
    if not report.internally_stable:
        raise NotStableError(f"realization is {report.verdict}; impulse responses are unbounded or undefined",
                             verdict=report.verdict)
    expected = tm_impulse(report.S, horizon).coefficients
    program = compile_realization(r)
    worst = 0.
    with logtime(f"impulse match over {r.space.total} channels"):
        for c in range(r.space.total):
            d = np.zeros((horizon + 1, r.space.total))
            d[0, c] = 1.
            trace = simulate(program, d)
            worst = max(worst, float(np.max(np.abs(trace.values - expected[:, :, c]))))
    return ImpulseMatch(matched=worst <= tol, max_deviation=worst, horizon=horizon)
