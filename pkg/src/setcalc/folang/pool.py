"""Deterministic formula pools over {∈, =} for the translation checks.

The exhaustive pool holds every formula up to a node-count size and
quantifier depth, with free variables among ``x, y``, modulo a few
syntactic redundancies:

* no ``u in u`` and no ``u = v`` unless ``u`` precedes ``v``;
* no double negation;
* ``&`` and ``|`` take their operands in one canonical order and never
  repeat an operand (``->`` takes every ordered pair);
* the quantifier at depth d binds the d-th bound variable (z, then w, ...)
  and that variable occurs free in its body.

Size counts AST nodes: an atom is 1, each connective or quantifier adds 1.
"""

from __future__ import annotations

import random
from typing import Dict, Iterator, List, Tuple

from .syntax import And, Eq, Exists, Forall, Formula, Implies, Mem, Not, Or, free_vars

VARIABLES = ("x", "y", "z", "w", "v", "u", "t")
FREE = VARIABLES[:2]
POOL_SEED = 20250611


def _atoms(scope: Tuple[str, ...]) -> List[Formula]:
    out: List[Formula] = []
    for i, a in enumerate(scope):
        for j, b in enumerate(scope):
            if i != j:
                out.append(Mem(a, b))
            if i < j:
                out.append(Eq(a, b))
    return out


class FormulaPool:
    """Layers ``layer(d, s)``: formulas of size s in scope depth d."""

    def __init__(self, max_size: int = 7, max_depth: int = 2):
        self.max_size = max_size
        self.max_depth = max_depth
        self._layers: Dict[Tuple[int, int], List[Formula]] = {}

    def scope(self, d: int) -> Tuple[str, ...]:
        return VARIABLES[: 2 + d]

    def layer(self, d: int, s: int) -> List[Formula]:
        """Materialized layer; only used for sizes below the maximum."""
        key = (d, s)
        if key not in self._layers:
            self._layers[key] = list(self._generate(d, s))
        return self._layers[key]

    def _generate(self, d: int, s: int) -> Iterator[Formula]:
        if s == 1:
            yield from _atoms(self.scope(d))
            return
        for phi in self.layer(d, s - 1):
            if not isinstance(phi, Not):
                yield Not(phi)
        for a in range(1, s - 1):
            b = s - 1 - a
            left, right = self.layer(d, a), self.layer(d, b)
            for p in left:
                for q in right:
                    yield Implies(p, q)
            if a < b:
                for p in left:
                    for q in right:
                        yield And(p, q)
                        yield Or(p, q)
            elif a == b:
                for i, p in enumerate(left):
                    for q in left[i + 1:]:
                        yield And(p, q)
                        yield Or(p, q)
        remaining = self.max_depth - d
        if remaining > 0:
            var = VARIABLES[2 + d]
            for body in self.layer(d + 1, s - 1):
                if var in free_vars(body):
                    yield Exists(var, body)
                    yield Forall(var, body)

    def top(self) -> Iterator[Formula]:
        """Every pool formula, smallest first.  The largest layer streams."""
        for s in range(1, self.max_size):
            yield from self.layer(0, s)
        yield from self._generate(0, self.max_size)

    def count(self) -> int:
        return sum(1 for _ in self.top())


def random_formula(rng: random.Random, depth: int, size: int, d: int = 0) -> Formula:
    """A random formula whose quantifier nesting reaches exactly ``depth``.

    ``size`` is the node budget; it is raised when the depth demands it.
    """
    scope = VARIABLES[: 2 + d]
    if depth > 0 and (size <= depth + 1 or rng.random() < 0.4):
        var = VARIABLES[2 + d]
        body = random_formula(rng, depth - 1, max(size - 1, depth), d + 1)
        if var not in free_vars(body):
            body = And(Mem(var, rng.choice(scope)), body)
        return (Exists if rng.random() < 0.5 else Forall)(var, body)
    if size <= 1 and depth == 0:
        a, b = rng.sample(scope, 2)
        return Mem(a, b) if rng.random() < 0.6 else Eq(a, b)
    if rng.random() < 0.2 and size >= 2:
        return Not(random_formula(rng, depth, size - 1, d))
    left = max(1, rng.randint(1, max(1, size - 2)))
    right = max(1, size - 1 - left)
    op = rng.choice((And, Or, Implies))
    if rng.random() < 0.5:
        return op(random_formula(rng, depth, left, d), random_formula(rng, 0, right, d))
    return op(random_formula(rng, 0, left, d), random_formula(rng, depth, right, d))


def random_pool(count: int = 200, seed: int = POOL_SEED, min_depth: int = 3, max_depth: int = 4) -> List[Formula]:
    """Deeper formulas than the exhaustive pool, reproducible from ``seed``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        depth = rng.randint(min_depth, max_depth)
        out.append(random_formula(rng, depth, rng.randint(depth + 2, depth + 8)))
    return out
