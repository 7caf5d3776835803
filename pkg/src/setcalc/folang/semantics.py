"""Finite structures, Tarskian evaluation, and vectorized truth tables.

Starred and plain atoms read the same relations: a structure built from
codes already interprets ∈ and = by ∈* and =*.  ``omega`` is read through
the structure's ``omega`` mask, and ``plus`` through its set of index triples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import ElementNotInDomain, UnboundVariable
from ..kernel import HFSet, is_natural, set_to_nat
from ..trees import tcoll
from ..universe import CodeUniverse
from .syntax import (
    BINARY,
    OMEGA,
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Mem,
    Not,
    Or,
    Plus,
    Suitable,
    free_vars,
)


@dataclass(frozen=True, eq=False)
class Structure:
    domain: Tuple[Hashable, ...]
    interp_in: np.ndarray
    interp_eq: np.ndarray
    interp_suitable: np.ndarray
    omega: np.ndarray
    plus: FrozenSet[Tuple[int, int, int]] = frozenset()
    extensional: bool = False
    index: Dict[Hashable, int] = field(default_factory=dict, repr=False)
    preds: Tuple[Tuple[int, ...], ...] = field(default=(), repr=False)

    def __post_init__(self):
        if not self.index:
            object.__setattr__(self, "index", {d: i for i, d in enumerate(self.domain)})
        if not self.preds:
            n = len(self.domain)
            preds = tuple(tuple(int(a) for a in np.flatnonzero(self.interp_in[:, b])) for b in range(n))
            object.__setattr__(self, "preds", preds)

    def __len__(self) -> int:
        return len(self.domain)


def mk_structure(
    domain: Sequence[Hashable],
    member,
    equal=None,
    suitable=None,
    natural=None,
    extensional: bool = False,
) -> Structure:
    """Build a structure from predicates on domain elements."""
    dom = tuple(domain)
    n = len(dom)
    mem = np.array([[bool(member(a, b)) for b in dom] for a in dom], dtype=bool).reshape(n, n)
    if equal is None:
        eq = np.eye(n, dtype=bool)
    else:
        eq = np.array([[bool(equal(a, b)) for b in dom] for a in dom], dtype=bool).reshape(n, n)
    suit = np.array([bool(suitable(a)) if suitable else False for a in dom], dtype=bool)
    om = np.array([bool(natural(a)) if natural else False for a in dom], dtype=bool)
    return Structure(dom, mem, eq, suit, om, frozenset(), extensional)


def hf_structure(sets: Sequence[HFSet], with_plus: bool = True) -> Structure:
    """HF sets under real ∈ and =, with ω read as is_natural.

    ``plus`` holds the triples (x, y, z) of naturals in the domain with
    x + y = z.
    """
    dom = tuple(sets)
    n = len(dom)
    index = {d: i for i, d in enumerate(dom)}
    mem = np.zeros((n, n), dtype=bool)
    for j, b in enumerate(dom):
        for a in b:
            i = index.get(a)
            if i is not None:
                mem[i, j] = True
    om = np.array([is_natural(d) for d in dom], dtype=bool)
    triples = set()
    if with_plus:
        nats = {set_to_nat(d): i for i, d in enumerate(dom) if om[i]}
        for x, i in nats.items():
            for y, j in nats.items():
                k = nats.get(x + y)
                if k is not None:
                    triples.add((i, j, k))
    return Structure(
        dom, mem, np.eye(n, dtype=bool), np.zeros(n, dtype=bool), om, frozenset(triples), True, index
    )


JUNK_PREFIX = "junk"


def v_structure(U: CodeUniverse, junk: int = 0) -> Structure:
    """Codes under =* and ∈*, all suitable.

    ``junk`` appends that many non-suitable elements related to nothing but
    themselves; they exist to show what the literal → reading of ∃ does.
    """
    n = len(U) + junk
    mem = np.zeros((n, n), dtype=bool)
    mem[: len(U), : len(U)] = U.in_matrix
    eq = np.eye(n, dtype=bool)
    eq[: len(U), : len(U)] = U.eq_matrix
    suit = np.zeros(n, dtype=bool)
    suit[: len(U)] = True
    dom = tuple(U.trees) + tuple(f"{JUNK_PREFIX}{i}" for i in range(junk))
    return Structure(dom, mem, eq, suit, np.zeros(n, dtype=bool))


def h_structure(U: CodeUniverse) -> Structure:
    """The distinct collapses of U under real membership."""
    seen: List[HFSet] = []
    for a in U.collapses():
        if a not in seen:
            seen.append(a)
    return hf_structure(seen, with_plus=False)


# --- Tarskian evaluation ------------------------------------------------------


def _lookup(env: Mapping[str, int], v: str) -> int:
    try:
        return env[v]
    except KeyError:
        raise UnboundVariable(f"variable {v!r} is unbound") from None


def _holds(phi: Formula, M: Structure, env: Dict[str, int]) -> bool:
    if isinstance(phi, Mem):
        a = _lookup(env, phi.left)
        if phi.right == OMEGA:
            return bool(M.omega[a])
        return bool(M.interp_in[a, _lookup(env, phi.right)])
    if isinstance(phi, Eq):
        return bool(M.interp_eq[_lookup(env, phi.left), _lookup(env, phi.right)])
    if isinstance(phi, Suitable):
        return bool(M.interp_suitable[_lookup(env, phi.var)])
    if isinstance(phi, Plus):
        return (_lookup(env, phi.a), _lookup(env, phi.b), _lookup(env, phi.c)) in M.plus
    if isinstance(phi, Not):
        return not _holds(phi.body, M, env)
    if isinstance(phi, And):
        return _holds(phi.left, M, env) and _holds(phi.right, M, env)
    if isinstance(phi, Or):
        return _holds(phi.left, M, env) or _holds(phi.right, M, env)
    if isinstance(phi, Implies):
        return not _holds(phi.left, M, env) or _holds(phi.right, M, env)
    if isinstance(phi, (Exists, Forall)):
        rng = range(len(M))
    elif phi.bound == OMEGA:
        rng = np.flatnonzero(M.omega)
    else:
        rng = M.preds[_lookup(env, phi.bound)]
    saved = env.get(phi.var)
    want = isinstance(phi, (Exists, BoundedExists))
    result = not want
    for d in rng:
        env[phi.var] = int(d)
        if _holds(phi.body, M, env) == want:
            result = want
            break
    if saved is None:
        env.pop(phi.var, None)
    else:
        env[phi.var] = saved
    return result


def evaluate(phi: Formula, M: Structure, assignment: Mapping[str, Hashable]) -> bool:
    """Truth of ``phi`` in ``M`` under ``assignment`` (variable → element)."""
    missing = free_vars(phi) - set(assignment)
    if missing:
        raise UnboundVariable(f"no value for {', '.join(sorted(missing))}")
    env = {}
    for v, d in assignment.items():
        if d not in M.index:
            raise ElementNotInDomain(f"value of {v} is not an element of the structure")
        env[v] = M.index[d]
    return _holds(phi, M, env)


def evaluate_indices(phi: Formula, M: Structure, env: Mapping[str, int]) -> bool:
    return _holds(phi, M, dict(env))


# --- truth tables --------------------------------------------------------------


class TruthTables:
    """Memoized truth tables over one structure.

    A table for φ is a boolean array with one axis per free variable, in
    sorted variable order.  Subformulas shared across a formula pool are
    computed once.
    """

    def __init__(self, M: Structure):
        self.M = M
        self.memo: Dict[Formula, Tuple[Tuple[str, ...], np.ndarray]] = {}
        n = len(M)
        self._plus: Optional[np.ndarray] = None
        self._n = n

    def plus_array(self) -> np.ndarray:
        if self._plus is None:
            arr = np.zeros((self._n,) * 3, dtype=bool)
            for t in self.M.plus:
                arr[t] = True
            self._plus = arr
        return self._plus

    def table(self, phi: Formula) -> Tuple[Tuple[str, ...], np.ndarray]:
        hit = self.memo.get(phi)
        if hit is None:
            hit = self._compute(phi)
            self.memo[phi] = hit
        return hit

    def _atom(self, names: Sequence[str], arr: np.ndarray) -> Tuple[Tuple[str, ...], np.ndarray]:
        # merge repeated variables by taking diagonals, then sort the axes
        names = list(names)
        while len(set(names)) < len(names):
            for i in range(len(names)):
                j = names.index(names[i])
                if j != i:
                    arr = np.diagonal(arr, axis1=j, axis2=i)
                    # diagonal moves the merged axis to the end
                    name = names[i]
                    names = [v for k, v in enumerate(names) if k not in (i, j)] + [name]
                    break
        order = sorted(range(len(names)), key=lambda k: names[k])
        return tuple(names[k] for k in order), np.transpose(arr, order).copy()

    def _compute(self, phi: Formula) -> Tuple[Tuple[str, ...], np.ndarray]:
        M = self.M
        if isinstance(phi, Mem):
            if phi.right == OMEGA:
                return self._atom([phi.left], M.omega)
            return self._atom([phi.left, phi.right], M.interp_in)
        if isinstance(phi, Eq):
            return self._atom([phi.left, phi.right], M.interp_eq)
        if isinstance(phi, Suitable):
            return self._atom([phi.var], M.interp_suitable)
        if isinstance(phi, Plus):
            return self._atom([phi.a, phi.b, phi.c], self.plus_array())
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
            return names, np.broadcast_to(out, (self._n,) * len(names)).copy()
        names, arr = self.table(phi.body)
        if isinstance(phi, (BoundedExists, BoundedForall)):
            if phi.bound == OMEGA:
                gn, guard = self._atom([phi.var], M.omega)
            else:
                gn, guard = self._atom([phi.var, phi.bound], M.interp_in)
            merged = tuple(sorted(set(names) | set(gn)))
            body, guard = _align(names, arr, merged), _align(gn, guard, merged)
            arr = (guard & body) if isinstance(phi, BoundedExists) else (~guard | body)
            names = merged
            arr = np.broadcast_to(arr, (self._n,) * len(names))
        existential = isinstance(phi, (Exists, BoundedExists))
        if phi.var not in names:
            # vacuous quantifier over a nonempty domain
            if self._n == 0:
                return names, np.full((0,) * len(names), not existential)
            return names, np.array(arr, dtype=bool)
        axis = names.index(phi.var)
        out = arr.any(axis=axis) if existential else arr.all(axis=axis)
        return names[:axis] + names[axis + 1:], out


def _align(names: Sequence[str], arr: np.ndarray, target: Sequence[str]) -> np.ndarray:
    """View ``arr`` (axes ``names``, sorted) broadcastable against ``target`` axes."""
    shape = []
    src = iter(arr.shape)
    present = set(names)
    for v in target:
        shape.append(next(src) if v in present else 1)
    return arr.reshape(shape)


def truth_table(phi: Formula, M: Structure, variables: Sequence[str]) -> np.ndarray:
    """Truth values of ``phi`` for every assignment to ``variables``.

    The result has one axis per entry of ``variables``; variables not free
    in ``phi`` broadcast.
    """
    missing = free_vars(phi) - set(variables)
    if missing:
        raise UnboundVariable(f"no axis for {', '.join(sorted(missing))}")
    names, arr = TruthTables(M).table(phi)
    return _to_axes(names, arr, variables, len(M))


def _to_axes(names, arr, variables, n) -> np.ndarray:
    order = sorted(set(variables))
    full = np.broadcast_to(_align(names, arr, order), (n,) * len(order))
    perm = [order.index(v) for v in variables]
    return np.transpose(full, perm)


def collapse_assignment(U: CodeUniverse, H: Structure) -> List[int]:
    """For each tree of U, the index of its collapse in ``H``."""
    return [H.index[tcoll(t)] for t in U.trees]
