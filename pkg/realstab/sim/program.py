"""
Compilation of a realization eta = R eta + d into difference equations.

Every proper entry becomes a SISO transposed direct-form-II filter. A diagonal block of the
form P0 + P1 z with -P1 invertible (for instance A + (1 - z)I) becomes a state row
eta_a[t+1] = (-P1)^-1 ((P0 - I) eta_a[t] + rest_a[t] + d_a[t]). The remaining (algebraic)
signals are solved at every step from the instantaneous feedthrough loop.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import networkx as nx
import numpy as np

from ..exceptions import IllPosedError, ImproperError
from ..ratcore import RationalFunction
from ..realization import Realization, SignalSpace

__all__ = ['EntryFilter', 'StateRow', 'RealizationProgram', 'compile_realization']


@dataclass(frozen=True)
class EntryFilter:
    """y = H(z) x for the entry R[row, col], with H written in powers of z^-1"""
    row: int
    col: int
    b: np.ndarray  # numerator b_0..b_n
    a: np.ndarray  # denominator 1, a_1..a_n

    @classmethod
    def from_rational(cls, row: int, col: int, r: RationalFunction) -> 'EntryFilter':
        n = int(r.den.degree)
        num = np.zeros(n + 1)
        num[:len(r.num.coeffs)] = r.num.coeffs
        return cls(row, col, num[::-1].copy(), r.den.coeffs[::-1].copy())

    @property
    def order(self) -> int:
        return len(self.a) - 1

    @property
    def feedthrough(self) -> float:
        return float(self.b[0])


@dataclass(frozen=True)
class StateRow:
    signal: str
    rows: np.ndarray  # flat positions of the signal
    drift: np.ndarray  # P0 - I
    inverse_lead: np.ndarray  # (-P1)^-1


@dataclass(frozen=True, eq=False)
class RealizationProgram:
    space: SignalSpace
    filters: Tuple[EntryFilter, ...]
    states: Tuple[StateRow, ...]
    algebraic: np.ndarray  # flat positions solved each step
    feedthrough: np.ndarray  # total x total matrix of instantaneous gains of the filters
    graph: nx.DiGraph = field(repr=False)
    order: Optional[Tuple[int, ...]] = None  # topological order of `algebraic` when the loop graph is acyclic
    loop_inverse: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def total(self) -> int:
        return self.space.total

    @property
    def acyclic(self) -> bool:
        return self.order is not None


def _state_row(r: Realization, name: str) -> Optional[StateRow]:
    """P0 + P1 z when the diagonal block is a polynomial of degree one in z"""
    block = r.block(name, name)
    entries = block.entries
    if not all(e.is_polynomial and e.num.degree <= 1 for e in entries.ravel()):
        return None
    if all(e.num.degree <= 0 for e in entries.ravel()):
        return None
    P0, P1 = np.zeros(entries.shape), np.zeros(entries.shape)
    for (i, j), e in np.ndenumerate(entries):
        c = e.num.coeffs
        P0[i, j] = c[0] if len(c) > 0 else 0.
        P1[i, j] = c[1] if len(c) > 1 else 0.
    try:
        inverse_lead = np.linalg.inv(-P1)
    except np.linalg.LinAlgError as e:
        raise ImproperError(f"diagonal block of `{name}` is improper and its z-coefficient is singular",
                            signal=name) from e
    return StateRow(name, r.space.indices(name), P0 - np.eye(len(P0)), inverse_lead)


def compile_realization(r: Realization) -> RealizationProgram:
    space = r.space
    labels = space.labels()
    states = []
    owner = {}
    for name in space.names:
        s = _state_row(r, name)
        if s is not None:
            states.append(s)
            for i in s.rows:
                owner[int(i)] = name
    filters = []
    for (i, j), e in np.ndenumerate(r.R.entries):
        if e.is_zero:
            continue
        if i in owner and owner.get(j) == owner[i]:
            continue  # part of a state row's P0 + P1 z
        if not e.proper:
            raise ImproperError(f"entry R[{labels[i]}, {labels[j]}] is improper and cannot be simulated",
                                entry=[labels[i], labels[j]])
        filters.append(EntryFilter.from_rational(i, j, e))
    n = space.total
    feedthrough = np.zeros((n, n))
    for f in filters:
        feedthrough[f.row, f.col] += f.feedthrough
    algebraic = np.array([i for i in range(n) if i not in owner], dtype=int)
    graph = nx.DiGraph()
    graph.add_nodes_from(int(i) for i in algebraic)
    graph.add_edges_from((int(j), int(i)) for i in algebraic for j in algebraic if feedthrough[i, j] != 0)
    order, loop_inverse = None, None
    if nx.is_directed_acyclic_graph(graph):
        order = tuple(nx.topological_sort(graph))
    else:
        loop = np.eye(len(algebraic)) - feedthrough[np.ix_(algebraic, algebraic)]
        if np.linalg.matrix_rank(loop) < len(algebraic):
            raise IllPosedError("ill-posed diagram", cycles=[[labels[i] for i in c] for c in nx.simple_cycles(graph)][:5])
        loop_inverse = np.linalg.inv(loop)
        logging.info(f"instantaneous loop through {len(algebraic)} signals solved densely "
                     f"(condition number {np.linalg.cond(loop):.3g})")
    return RealizationProgram(space=space, filters=tuple(filters), states=tuple(states), algebraic=algebraic,
                              feedthrough=feedthrough, graph=graph, order=order, loop_inverse=loop_inverse)
