from dataclasses import dataclass
from typing import Tuple, Union, Iterable, List, Dict

import numpy as np

from ..exceptions import DimensionError, UnknownSignalError
from ..tfmat import TransferMatrix
from ..utilities import suggest

__all__ = ['Signal', 'SignalSpace']


@dataclass(frozen=True)
class Signal:
    name: str
    dim: int

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise DimensionError(f"signal names must be non-empty strings, got {self.name!r}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise DimensionError(f"signal `{self.name}` must have a positive integer dimension, got {self.dim}")
        object.__setattr__(self, 'dim', int(self.dim))


SignalLike = Union[Signal, Tuple[str, int]]


class SignalSpace:
    """
    Ordered named blocks of the stacked signal vector eta. Blocks are addressed by name;
    the constructor order is the layout of R and S.
    """
    __slots__ = ('_signals', '_offsets')

    def __init__(self, signals: Iterable[SignalLike]):
        signals = tuple(s if isinstance(s, Signal) else Signal(*s) for s in signals)
        if not signals:
            raise DimensionError("a signal space needs at least one signal")
        names = [s.name for s in signals]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise DimensionError(f"signal names must be unique, repeated: {duplicates}")
        self._signals = signals
        offsets, start = {}, 0
        for s in signals:
            offsets[s.name] = start
            start += s.dim
        self._offsets = offsets

    @classmethod
    def of(cls, *signals: SignalLike) -> 'SignalSpace':
        return cls(signals)

    @property
    def signals(self) -> Tuple[Signal, ...]:
        return self._signals

    @property
    def names(self) -> List[str]:
        return [s.name for s in self._signals]

    @property
    def dims(self) -> List[int]:
        return [s.dim for s in self._signals]

    @property
    def total(self) -> int:
        return sum(self.dims)

    def check(self, name: str) -> str:
        if name not in self._offsets:
            raise UnknownSignalError(f"unknown signal `{name}`, did you mean one of {suggest(name, self.names)}?",
                                     signal=name, known=self.names)
        return name

    def dim(self, name: str) -> int:
        return self._signals[self.index(name)].dim

    def index(self, name: str) -> int:
        return self.names.index(self.check(name))

    def slice(self, name: str) -> slice:
        start = self._offsets[self.check(name)]
        return slice(start, start + self.dim(name))

    def indices(self, names: Union[str, Iterable[str]]) -> np.ndarray:
        """Flat positions of one or more named blocks, in the order given"""
        if isinstance(names, str):
            names = [names]
        return np.concatenate([np.arange(self.total)[self.slice(n)] for n in names])

    def labels(self) -> List[str]:
        """`name[i]` for every scalar component, in layout order"""
        return [f"{s.name}[{i}]" for s in self._signals for i in range(s.dim)]

    def selector(self, name: str) -> TransferMatrix:
        """e_a: the total x dim(a) block column with an identity at the rows of `name`"""
        e = np.zeros((self.total, self.dim(name)))
        e[self.slice(name)] = np.eye(self.dim(name))
        return TransferMatrix.constant(e)

    def extended(self, *signals: SignalLike) -> 'SignalSpace':
        return SignalSpace(self._signals + tuple(signals))

    def subspace(self, names: Iterable[str]) -> 'SignalSpace':
        return SignalSpace([self._signals[self.index(n)] for n in names])

    def split(self, vector: np.ndarray) -> Dict[str, np.ndarray]:
        return {s.name: vector[..., self.slice(s.name)] for s in self._signals}

    def __contains__(self, name) -> bool:
        return name in self._offsets

    def __iter__(self):
        return iter(self._signals)

    def __len__(self):
        return len(self._signals)

    def __eq__(self, other):
        if not isinstance(other, SignalSpace):
            return NotImplemented
        return self._signals == other._signals

    def __hash__(self):
        return hash(self._signals)

    def to_list(self):
        return [{'name': s.name, 'dim': s.dim} for s in self._signals]

    def __repr__(self):
        return f"SignalSpace({', '.join(f'{s.name}:{s.dim}' for s in self._signals)})"
