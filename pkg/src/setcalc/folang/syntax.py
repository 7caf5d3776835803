"""Formula AST over {∈, =} plus ``suitable`` and two arithmetic parameters.

``omega`` is a reserved constant: it may appear on the right of ``in`` and as
the bound of a bounded quantifier.  ``plus(x, y, z)`` is the graph of
addition on naturals.  Bare ∈ cannot define doubling on von Neumann
naturals (the structure (ω, ∈) is just (ω, <)), so the Δ0 library needs
addition as a second parameter alongside ω.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, Set, Union

OMEGA = "omega"


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)


@dataclass(frozen=True)
class Mem(Formula):
    left: str
    right: str
    star: bool = False


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str
    star: bool = False


@dataclass(frozen=True)
class Suitable(Formula):
    var: str


@dataclass(frozen=True)
class Plus(Formula):
    a: str
    b: str
    c: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class BoundedExists(Formula):
    var: str
    bound: str
    body: Formula


@dataclass(frozen=True)
class BoundedForall(Formula):
    var: str
    bound: str
    body: Formula


Atom = Union[Mem, Eq, Suitable, Plus]
ATOMS = (Mem, Eq, Suitable, Plus)
BINARY = (And, Or, Implies)
UNBOUNDED = (Exists, Forall)
BOUNDED = (BoundedExists, BoundedForall)


def conj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def atom_vars(phi: Formula):
    if isinstance(phi, (Mem, Eq)):
        return (phi.left, phi.right)
    if isinstance(phi, Suitable):
        return (phi.var,)
    if isinstance(phi, Plus):
        return (phi.a, phi.b, phi.c)
    raise TypeError(phi)


def free_vars(phi: Formula) -> FrozenSet[str]:
    if isinstance(phi, ATOMS):
        return frozenset(v for v in atom_vars(phi) if v != OMEGA)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, BINARY):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, UNBOUNDED):
        return free_vars(phi.body) - {phi.var}
    if isinstance(phi, BOUNDED):
        bound = frozenset() if phi.bound == OMEGA else frozenset([phi.bound])
        return (free_vars(phi.body) - {phi.var}) | bound
    raise TypeError(phi)


def is_delta0(phi: Formula) -> bool:
    """True iff every quantifier is bounded."""
    if isinstance(phi, ATOMS):
        return True
    if isinstance(phi, Not):
        return is_delta0(phi.body)
    if isinstance(phi, BINARY):
        return is_delta0(phi.left) and is_delta0(phi.right)
    if isinstance(phi, UNBOUNDED):
        return False
    if isinstance(phi, BOUNDED):
        return is_delta0(phi.body)
    raise TypeError(phi)


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif isinstance(phi, BINARY):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, (UNBOUNDED, BOUNDED)):
        yield from subformulas(phi.body)


def size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


def quantifier_depth(phi: Formula) -> int:
    if isinstance(phi, ATOMS):
        return 0
    if isinstance(phi, Not):
        return quantifier_depth(phi.body)
    if isinstance(phi, BINARY):
        return max(quantifier_depth(phi.left), quantifier_depth(phi.right))
    return 1 + quantifier_depth(phi.body)


def rename_free(phi: Formula, mapping: Dict[str, str]) -> Formula:
    """Substitute variables for free occurrences; the caller avoids capture."""
    def r(v):
        return mapping.get(v, v)

    if isinstance(phi, Mem):
        return Mem(r(phi.left), r(phi.right), phi.star)
    if isinstance(phi, Eq):
        return Eq(r(phi.left), r(phi.right), phi.star)
    if isinstance(phi, Suitable):
        return Suitable(r(phi.var))
    if isinstance(phi, Plus):
        return Plus(r(phi.a), r(phi.b), r(phi.c))
    if isinstance(phi, Not):
        return Not(rename_free(phi.body, mapping))
    if isinstance(phi, BINARY):
        return type(phi)(rename_free(phi.left, mapping), rename_free(phi.right, mapping))
    inner = {k: v for k, v in mapping.items() if k != phi.var}
    if isinstance(phi, UNBOUNDED):
        return type(phi)(phi.var, rename_free(phi.body, inner))
    return type(phi)(phi.var, r(phi.bound), rename_free(phi.body, inner))


def normalize(phi: Formula) -> Formula:
    """Rename bound variables apart so no quantifier shadows another name."""
    taken: Set[str] = set(free_vars(phi)) | {OMEGA}
    counter = itertools.count()

    def fresh(base: str) -> str:
        if base not in taken:
            taken.add(base)
            return base
        while True:
            cand = f"{base}{next(counter)}"
            if cand not in taken:
                taken.add(cand)
                return cand

    def go(f: Formula, env: Dict[str, str]) -> Formula:
        if isinstance(f, ATOMS):
            return rename_free(f, env)
        if isinstance(f, Not):
            return Not(go(f.body, env))
        if isinstance(f, BINARY):
            return type(f)(go(f.left, env), go(f.right, env))
        new = fresh(f.var)
        body = go(f.body, {**env, f.var: new})
        if isinstance(f, UNBOUNDED):
            return type(f)(new, body)
        return type(f)(new, env.get(f.bound, f.bound), body)

    return go(phi, {})


# --- printing ----------------------------------------------------------------

_PREC = {Implies: 1, Or: 2, And: 3}
_OPS = {Implies: "->", Or: "|", And: "&"}


def print_formula(phi: Formula) -> str:
    return _show(phi, 0)


def _show(phi: Formula, ctx: int) -> str:
    """``ctx`` is the binding strength the surrounding position demands."""
    if isinstance(phi, Mem):
        return f"{phi.left} {'in*' if phi.star else 'in'} {phi.right}"
    if isinstance(phi, Eq):
        return f"{phi.left} {'=*' if phi.star else '='} {phi.right}"
    if isinstance(phi, Suitable):
        return f"suitable({phi.var})"
    if isinstance(phi, Plus):
        return f"plus({phi.a}, {phi.b}, {phi.c})"
    if isinstance(phi, Not):
        return "not " + _show(phi.body, 4)
    if isinstance(phi, BINARY):
        p = _PREC[type(phi)]
        if isinstance(phi, Implies):
            left, right = _show(phi.left, p + 1), _show(phi.right, p)
        else:
            left, right = _show(phi.left, p), _show(phi.right, p + 1)
        text = f"{left} {_OPS[type(phi)]} {right}"
        return f"({text})" if p < ctx else text
    if isinstance(phi, Exists):
        text = f"exists {phi.var}. {_show(phi.body, 0)}"
    elif isinstance(phi, Forall):
        text = f"forall {phi.var}. {_show(phi.body, 0)}"
    elif isinstance(phi, BoundedExists):
        text = f"exists {phi.var} in {phi.bound}. {_show(phi.body, 0)}"
    elif isinstance(phi, BoundedForall):
        text = f"forall {phi.var} in {phi.bound}. {_show(phi.body, 0)}"
    else:
        raise TypeError(phi)
    # a quantifier body runs to the end, so any enclosing operator needs parens
    return f"({text})" if ctx > 0 else text

