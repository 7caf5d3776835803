"""Finite universes of codes with precomputed =* and ∈* matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

import numpy as np

from .bisim import eq_star, in_star
from .kernel import HFSet
from .trees import Tree, tcoll


@dataclass(frozen=True, eq=False)
class CodeUniverse:
    trees: Tuple[Tree, ...]
    eq_matrix: np.ndarray
    in_matrix: np.ndarray
    index: Dict[Tree, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.trees)

    def __contains__(self, t: object) -> bool:
        return t in self.index

    def __iter__(self):
        return iter(self.trees)

    def position(self, t: Tree) -> int:
        return self.index[t]

    def collapses(self) -> List[HFSet]:
        return [tcoll(t) for t in self.trees]


def mk_universe(trees: Iterable[Tree]) -> CodeUniverse:
    """Fill the matrices by bisimulation; repeated trees are kept once."""
    ordered: List[Tree] = []
    seen = set()
    for t in trees:
        if t not in seen:
            seen.add(t)
            ordered.append(t)
    n = len(ordered)
    eq = np.zeros((n, n), dtype=bool)
    mem = np.zeros((n, n), dtype=bool)
    for i, s in enumerate(ordered):
        for j, t in enumerate(ordered):
            eq[i, j] = i == j or eq_star(s, t)
            mem[i, j] = in_star(s, t)
    eq.setflags(write=False)
    mem.setflags(write=False)
    return CodeUniverse(tuple(ordered), eq, mem, {t: i for i, t in enumerate(ordered)})
