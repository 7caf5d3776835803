"""Truth tables for many small structures at once, one structure per bit.

Up to 64 structures are padded to a common size ``n``.  A table is a uint64
array with one axis of length ``n`` per free variable; bit ``b`` of an entry
is the truth value in structure ``b``.  Padding elements are masked out of
every quantifier, and entries that touch padding are meaningless.

Memo entries are keyed by object id (and hold the formula, so an id is
never reused while cached): a pool that shares subformulas is evaluated
once per distinct node.  Tables are kept for good until ``budget_bytes`` is
spent; after that new tables go through a small LRU.
"""

from __future__ import annotations

from collections import OrderedDict
from typing import Dict, Sequence, Tuple

import numpy as np

from .semantics import Structure
from .syntax import (
    BINARY,
    OMEGA,
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Exists,
    Formula,
    Mem,
    Not,
    Or,
    Plus,
    Suitable,
)

MAX_STRUCTURES = 64
ONE = np.uint64(1)

Table = Tuple[Tuple[str, ...], np.ndarray]


def _pack(mats: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Stack boolean arrays (each padded up to ``n`` per axis) into bits."""
    shape = (n,) * mats[0].ndim
    out = np.zeros(shape, dtype=np.uint64)
    for b, m in enumerate(mats):
        pad = [(0, n - k) for k in m.shape]
        out |= np.pad(m, pad).astype(np.uint64) << np.uint64(b)
    return out


class PackedTables:
    def __init__(self, structures: Sequence[Structure], budget_bytes: int = 256 << 20, recent_limit: int = 512):
        if not 0 < len(structures) <= MAX_STRUCTURES:
            raise ValueError(f"need 1..{MAX_STRUCTURES} structures, got {len(structures)}")
        self.structures = list(structures)
        self.sizes = [len(M) for M in structures]
        self.n = n = max(self.sizes)
        self.interp_in = _pack([M.interp_in for M in structures], n)
        self.interp_eq = _pack([M.interp_eq for M in structures], n)
        self.suitable = _pack([M.interp_suitable for M in structures], n)
        self.omega = _pack([M.omega for M in structures], n)
        self.plus = _pack([self._plus_dense(M) for M in structures], n) if any(M.plus for M in structures) else None
        # bit b of valid[i] is set when element i exists in structure b
        self.valid = _pack([np.ones(k, dtype=bool) for k in self.sizes], n)
        self.memo: Dict[int, Tuple[Formula, Table]] = {}
        self.recent: "OrderedDict[int, Tuple[Formula, Table]]" = OrderedDict()
        self.budget_bytes = budget_bytes
        self.recent_limit = recent_limit
        self.used_bytes = 0

    @staticmethod
    def _plus_dense(M: Structure) -> np.ndarray:
        arr = np.zeros((len(M),) * 3, dtype=bool)
        for t in M.plus:
            arr[t] = True
        return arr

    def table(self, phi: Formula) -> Table:
        key = id(phi)
        hit = self.memo.get(key)
        if hit is not None and hit[0] is phi:
            return hit[1]
        hit = self.recent.get(key)
        if hit is not None and hit[0] is phi:
            self.recent.move_to_end(key)
            return hit[1]
        out = self._compute(phi)
        nbytes = out[1].nbytes
        if self.used_bytes + nbytes <= self.budget_bytes:
            self.memo[key] = (phi, out)
            self.used_bytes += nbytes
        else:
            self.recent[key] = (phi, out)
            if len(self.recent) > self.recent_limit:
                self.recent.popitem(last=False)
        return out

    def _atom(self, names: Sequence[str], arr: np.ndarray) -> Table:
        names = list(names)
        if len(names) == 2 and names[0] == names[1]:
            return (names[0],), np.diagonal(arr).copy()
        if len(set(names)) < len(names):
            # plus with a repeated variable: gather the diagonal explicitly
            distinct = sorted(set(names))
            grids = np.meshgrid(*[np.arange(self.n)] * len(distinct), indexing="ij")
            pos = {v: grids[i] for i, v in enumerate(distinct)}
            return tuple(distinct), arr[tuple(pos[v] for v in names)]
        order = sorted(range(len(names)), key=lambda k: names[k])
        return tuple(names[k] for k in order), np.ascontiguousarray(np.transpose(arr, order))

    def _compute(self, phi: Formula) -> Table:
        if isinstance(phi, Mem):
            if phi.right == OMEGA:
                return self._atom([phi.left], self.omega)
            return self._atom([phi.left, phi.right], self.interp_in)
        if isinstance(phi, Eq):
            return self._atom([phi.left, phi.right], self.interp_eq)
        if isinstance(phi, Suitable):
            return self._atom([phi.var], self.suitable)
        if isinstance(phi, Plus):
            if self.plus is None:
                return self._atom([phi.a, phi.b, phi.c], np.zeros((self.n,) * 3, dtype=np.uint64))
            return self._atom([phi.a, phi.b, phi.c], self.plus)
        if isinstance(phi, Not):
            names, arr = self.table(phi.body)
            return names, ~arr
        if isinstance(phi, BINARY):
            ln, la = self.table(phi.left)
            rn, ra = self.table(phi.right)
            names = tuple(sorted(set(ln) | set(rn)))
            la, ra = _align(ln, la, names), _align(rn, ra, names)
            if isinstance(phi, And):
                out = la & ra
            elif isinstance(phi, Or):
                out = la | ra
            else:
                out = ~la | ra
            return names, np.broadcast_to(out, (self.n,) * len(names))
        names, arr = self.table(phi.body)
        if isinstance(phi, (BoundedExists, BoundedForall)):
            if phi.bound == OMEGA:
                gn, guard = self._atom([phi.var], self.omega)
            else:
                gn, guard = self._atom([phi.var, phi.bound], self.interp_in)
            merged = tuple(sorted(set(names) | set(gn)))
            body, guard = _align(names, arr, merged), _align(gn, guard, merged)
            arr = (guard & body) if isinstance(phi, BoundedExists) else (~guard | body)
            names = merged
            arr = np.broadcast_to(arr, (self.n,) * len(names))
        existential = isinstance(phi, (Exists, BoundedExists))
        if phi.var not in names:
            # vacuous over a nonempty domain; empty structures are not packed
            return names, arr
        axis = names.index(phi.var)
        shape = [1] * len(names)
        shape[axis] = self.n
        valid = self.valid.reshape(shape)
        if existential:
            out = np.bitwise_or.reduce(arr & valid, axis=axis)
        else:
            out = np.bitwise_and.reduce(arr | ~valid, axis=axis)
        return names[:axis] + names[axis + 1:], out

    def bits(self, phi: Formula, variables: Sequence[str]) -> np.ndarray:
        """Boolean array indexed [structure, *variables]."""
        names, arr = self.table(phi)
        order = sorted(set(variables))
        full = np.broadcast_to(_align(names, arr, order), (self.n,) * len(order))
        full = np.transpose(full, [order.index(v) for v in variables])
        shifts = np.arange(len(self.structures), dtype=np.uint64)
        return ((full[None, ...] >> shifts.reshape((-1,) + (1,) * len(variables))) & ONE).astype(bool)


def _align(names: Sequence[str], arr: np.ndarray, target: Sequence[str]) -> np.ndarray:
    shape = []
    src = iter(arr.shape)
    present = set(names)
    for v in target:
        shape.append(next(src) if v in present else 1)
    return arr.reshape(shape)
