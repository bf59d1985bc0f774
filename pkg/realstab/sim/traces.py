"""
Disturbance generators, CSV exchange of traces and the re-substitution check of a trace
against eta = R eta + d.
"""
from pathlib import Path
from typing import Iterable, Union

import numpy as np
import pandas as pd

from .program import compile_realization
from .simulate import SimTrace, disturbance_array
from ..exceptions import ParseError
from ..realization import Realization, SignalSpace
from ..tfmat import entry_impulse

__all__ = ['impulse_disturbance', 'white_noise_disturbance', 'write_trace', 'read_trace', 'read_disturbance',
           'trace_residual']


def impulse_disturbance(space: SignalSpace, signal: str, steps: int, index: int = 0, at: int = 0) -> np.ndarray:
    d = np.zeros((steps, space.total))
    dim = space.dim(signal)
    if not 0 <= index < dim:
        raise IndexError(f"`{signal}` has dimension {dim}, no component {index}")
    if 0 <= at < steps:
        d[at, space.index(signal) + index] = 1.
    return d


def white_noise_disturbance(space: SignalSpace, steps: int, seed: int = 42, scale: float = 1.,
                            signals: Iterable[str] = None) -> np.ndarray:
    """Gaussian noise on `signals` (all of them by default) from default_rng(seed)"""
    rng = np.random.default_rng(seed)
    d = np.zeros((steps, space.total))
    names = space.names if signals is None else list(signals)
    for name in names:
        d[:, space.slice(name)] = scale * rng.standard_normal((steps, space.dim(name)))
    return d


def write_trace(trace: SimTrace, path: Union[str, Path]):
    trace.to_frame().to_csv(path, index=False, float_format='%.17g')


def _read_frame(path: Union[str, Path], space: SignalSpace) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ParseError(f"cannot read {path}: {e}", path=str(path)) from e
    unknown = sorted(set(frame.columns) - set(space.labels()))
    if unknown:
        raise ParseError(f"columns {unknown} of {path} are not signals of {space}", columns=unknown)
    return frame


def read_trace(path: Union[str, Path], space: SignalSpace) -> SimTrace:
    frame = _read_frame(path, space)
    missing = sorted(set(space.labels()) - set(frame.columns))
    if missing:
        raise ParseError(f"trace {path} lacks columns {missing}", columns=missing)
    return SimTrace(space, frame[space.labels()].to_numpy(dtype=float))


def read_disturbance(path: Union[str, Path], space: SignalSpace, steps: int = None) -> np.ndarray:
    """Disturbance CSV with the trace header; absent columns are zero"""
    return disturbance_array(space, _read_frame(path, space), steps)


def trace_residual(r: Realization, trace: SimTrace, d=None) -> float:
    """
    max over t < steps - 1 of |eta[t] - (R eta)[t] - d[t]|, where proper entries act by
    convolution with their impulse coefficients and the z-part of a state row reads eta[t+1]
    """
    program = compile_realization(r)
    eta = trace.values
    steps, total = eta.shape
    d = disturbance_array(r.space, d, steps)
    owner = {int(i): s.signal for s in program.states for i in s.rows}
    image = np.zeros_like(eta)
    for (i, j), e in np.ndenumerate(r.R.entries):
        if e.is_zero:
            continue
        if i in owner and owner.get(j) == owner[i]:
            c = e.num.coeffs
            image[:, i] += (c[0] if len(c) > 0 else 0.) * eta[:, j]
            if len(c) > 1:
                image[:-1, i] += c[1] * eta[1:, j]
        else:
            image[:, i] += np.convolve(entry_impulse(e, steps - 1), eta[:, j])[:steps]
    residual = eta - image - d
    if steps < 2:
        return 0.
    return float(np.max(np.abs(residual[:-1])))
