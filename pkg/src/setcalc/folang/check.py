"""Batch check that a formula and its code translation agree.

For a universe U of codes, φ is evaluated on the collapses of U and the
translation of φ on the codes themselves; the two must agree at every
assignment of codes to the free variables ``x, y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from ..trees import Tree, print_tree, tcoll
from ..universe import CodeUniverse
from .packed import MAX_STRUCTURES, PackedTables
from .pool import FREE
from .semantics import h_structure, v_structure
from .syntax import Formula, free_vars, print_formula
from .translate import translate


@dataclass
class Mismatch:
    formula: Formula
    universe: int
    assignment: Tuple[Tree, ...]
    direct: bool
    translated: bool

    def describe(self) -> str:
        trees = ", ".join(print_tree(t).strip().replace("\n", "; ") or "<root>" for t in self.assignment)
        return (
            f"{print_formula(self.formula)} in universe {self.universe} at ({trees}): "
            f"collapses say {self.direct}, codes say {self.translated}"
        )


@dataclass
class TranslationReport:
    formulas: int = 0
    universes: int = 0
    assignments: int = 0
    mismatches: List[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


class _Batch:
    def __init__(self, universes: Sequence[CodeUniverse], literal: bool, junk: int):
        self.universes = list(universes)
        self.literal = literal
        hs = [h_structure(U) for U in universes]
        self.V = PackedTables([v_structure(U, junk) for U in universes])
        self.H = PackedTables(hs)
        B = len(universes)
        nv = self.V.n
        # cmap[b, i]: H index of the collapse of tree i of universe b
        cmap = np.zeros((B, nv), dtype=np.intp)
        valid = np.zeros(nv, dtype=np.uint64)
        for b, (U, H) in enumerate(zip(universes, hs)):
            for i, t in enumerate(U.trees):
                cmap[b, i] = H.index[tcoll(t)]
                valid[i] |= np.uint64(1) << np.uint64(b)
        self.rows = cmap[:, :, None]
        self.cols = cmap[:, None, :]
        self.own_bit = (np.uint64(1) << np.arange(B, dtype=np.uint64)).reshape(B, 1, 1)
        # assignments of real codes (never junk, never padding) to x and y
        self.valid_pairs = valid[:, None] & valid[None, :]
        self.assignments = int(sum(len(U) ** 2 for U in universes))
        self.memo: dict = {}

    def _xy(self, table, n: int) -> np.ndarray:
        names, arr = table
        extra = set(names) - set(FREE)
        if extra:
            raise ValueError(f"free variables beyond x, y: {sorted(extra)}")
        if names == FREE:
            return arr
        if names == (FREE[0],):
            return np.broadcast_to(arr[:, None], (n, n))
        if names == (FREE[1],):
            return np.broadcast_to(arr[None, :], (n, n))
        return np.broadcast_to(arr, (n, n))

    def compare(self, phi: Formula, report: TranslationReport, limit: int) -> None:
        t = translate(phi, self.literal, self.memo)
        self.memo.pop(id(phi), None)
        h = self._xy(self.H.table(phi), self.H.n)
        v = self._xy(self.V.table(t), self.V.n)
        # bit b of pulled[i, j] is H's value at the collapses of trees i, j of universe b
        pulled = np.bitwise_or.reduce(h[self.rows, self.cols] & self.own_bit, axis=0)
        diff = (v ^ pulled) & self.valid_pairs
        report.assignments += self.assignments
        if diff.any() and len(report.mismatches) < limit:
            self._record(phi, diff, v, report, limit)

    def _record(self, phi, diff, v, report, limit) -> None:
        fv = free_vars(phi)
        for i, j in np.argwhere(diff != 0):
            word = int(diff[i, j])
            for b in range(len(self.universes)):
                if len(report.mismatches) >= limit:
                    return
                if not word >> b & 1:
                    continue
                U = self.universes[b]
                if (FREE[0] not in fv and i) or (FREE[1] not in fv and j):
                    continue
                codes = bool(int(v[i, j]) >> b & 1)
                trees = tuple(U.trees[k] for k, var in ((i, FREE[0]), (j, FREE[1])) if var in fv)
                report.mismatches.append(Mismatch(phi, b, trees, not codes, codes))


def check_translation(
    universes: Sequence[CodeUniverse],
    formulas: Iterable[Formula],
    literal: bool = False,
    junk: int = 0,
    limit: int = 20,
) -> TranslationReport:
    """Compare φ on collapses with its translation on codes, everywhere.

    Formulas may only have ``x`` and ``y`` free.  ``junk`` adds that many
    non-suitable elements to each code structure.  Each input formula leaves
    the translation memo after use, so an arbitrarily long stream is fine;
    subformulas stay shared.
    """
    batches = [
        _Batch(universes[i:i + MAX_STRUCTURES], literal, junk)
        for i in range(0, len(universes), MAX_STRUCTURES)
    ]
    report = TranslationReport(universes=len(universes))
    for phi in formulas:
        report.formulas += 1
        for batch in batches:
            batch.compare(phi, report, limit)
    return report
