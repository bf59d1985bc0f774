from dataclasses import dataclass
from typing import Mapping, Tuple, Dict, List

import numpy as np

from ..exceptions import DimensionError, NotStableError
from ..realization import Realization, SignalSpace
from ..tfmat import TransferMatrix

__all__ = ['Perturbation']

Block = Tuple[str, str]


@dataclass(frozen=True, eq=False)
class Perturbation:
    """
    Additive perturbation R -> R + delta of a realization over `space`, non-zero only on the
    declared `structure` blocks.
    """
    space: SignalSpace
    delta: TransferMatrix
    structure: Tuple[Block, ...] = ()

    def __post_init__(self):
        delta = TransferMatrix.coerce(self.delta)
        n = self.space.total
        if delta.shape != (n, n):
            raise DimensionError(f"perturbation must be {n}x{n} for {self.space}, got {delta.shape}")
        structure = tuple((self.space.check(a), self.space.check(b)) for a, b in self.structure)
        declared = np.zeros((n, n), dtype=bool)
        for a, b in structure:
            declared[self.space.slice(a), self.space.slice(b)] = True
        stray = [(i, j) for (i, j), e in np.ndenumerate(delta.entries) if not declared[i, j] and not e.is_zero]
        if stray:
            labels = self.space.labels()
            raise DimensionError(f"perturbation has entries outside its declared blocks: "
                                 f"{[(labels[i], labels[j]) for i, j in stray[:5]]}")
        object.__setattr__(self, 'delta', delta)
        object.__setattr__(self, 'structure', structure)

    @classmethod
    def from_blocks(cls, space: SignalSpace, blocks: Mapping[Block, object]) -> 'Perturbation':
        r = Realization.from_blocks(space, blocks)
        return cls(r.space, r.R, tuple(k for k, v in blocks.items() if v is not None))

    @classmethod
    def zero(cls, space: SignalSpace) -> 'Perturbation':
        return cls(space, TransferMatrix.zeros(space.total, space.total))

    def block(self, a: str, b: str) -> TransferMatrix:
        return self.delta.take(self.space.indices(a), self.space.indices(b))

    @property
    def blocks(self) -> Dict[Block, TransferMatrix]:
        return {(a, b): self.block(a, b) for a, b in self.structure}

    @property
    def is_zero(self) -> bool:
        return self.delta.is_zero

    def unstable_blocks(self) -> List[Block]:
        return [k for k, m in self.blocks.items() if not m.classify().all_stable_proper]

    def require_stable(self):
        bad = self.unstable_blocks()
        if bad:
            raise NotStableError(f"perturbation blocks {bad} must be stable and proper", blocks=[list(b) for b in bad])

    def is_normalized(self) -> bool:
        """At most one non-zero declared block in every block row and every block column"""
        live = [k for k, m in self.blocks.items() if not m.is_zero]
        rows = [a for a, _ in live]
        cols = [b for _, b in live]
        return len(rows) == len(set(rows)) and len(cols) == len(set(cols))

    def apply(self, r: Realization) -> Realization:
        if r.space != self.space:
            raise DimensionError(f"perturbation over {self.space} cannot act on {r}")
        return Realization(r.space, r.R + self.delta)

    def normalize(self, r: Realization) -> Tuple[Realization, 'Perturbation']:
        """
        Split every block delta_ab through two new signals s (dim a) and t (dim b):
        R[a, s] = I, R[t, b] = I and delta'[s, t] = delta_ab. The original signals keep their
        closed-loop maps and delta' has one block per block row and column.
        """
        if r.space != self.space:
            raise DimensionError(f"perturbation over {self.space} cannot act on {r}")
        live = [(k, m) for k, m in self.blocks.items() if not m.is_zero]
        extra = []
        for k, ((a, b), _) in enumerate(live):
            extra += [(self._fresh(f"delta{k}.out"), self.space.dim(a)), (self._fresh(f"delta{k}.in"), self.space.dim(b))]
        space = self.space.extended(*extra)
        blocks = {(a, b): r.block(a, b) for a in self.space.names for b in self.space.names}
        dblocks = {}
        for k, ((a, b), m) in enumerate(live):
            s, t = extra[2 * k][0], extra[2 * k + 1][0]
            blocks[(a, s)] = TransferMatrix.identity(space.dim(a))
            blocks[(t, b)] = TransferMatrix.identity(space.dim(b))
            dblocks[(s, t)] = m
        return Realization.from_blocks(space, blocks), Perturbation.from_blocks(space, dblocks)

    def _fresh(self, name: str) -> str:
        while name in self.space:
            name = '_' + name
        return name

    def to_dict(self):
        return {'blocks': [{'block': [a, b], 'entries': m.to_list()} for (a, b), m in self.blocks.items()]}
