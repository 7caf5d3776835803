"""The code translation φ ↦ φᵗ: starred atoms, quantifiers relativized to
suitable trees."""

from __future__ import annotations

from typing import Dict, Optional, Tuple

from ..errors import UntranslatableAtom, UntranslatableBoundedQuantifier
from .syntax import (
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
)

Memo = Dict[int, Tuple[Formula, Formula]]


def translate(phi: Formula, literal: bool = False, memo: Optional[Memo] = None) -> Formula:
    """Translate a pure {∈, =} formula.

    ∀x ψ becomes ∀x (suitable(x) → ψᵗ) and ∃x ψ becomes
    ∃x (suitable(x) & ψᵗ).  With ``literal`` the existential clause also
    uses →; that variant is kept only to show how it goes wrong.

    ``memo`` (keyed by object id) lets a large pool sharing subformulas be
    translated with the same sharing.  Entries hold their input, so a
    recycled id cannot alias.
    """
    return _translate(phi, literal, memo)


def _translate(phi: Formula, literal: bool, memo: Optional[Memo]) -> Formula:
    if memo is not None:
        hit = memo.get(id(phi))
        if hit is not None and hit[0] is phi:
            return hit[1]
    out = _translate_node(phi, literal, memo)
    if memo is not None:
        memo[id(phi)] = (phi, out)
    return out


def _translate_node(phi: Formula, literal: bool, memo) -> Formula:
    if isinstance(phi, Mem):
        if phi.star or OMEGA in (phi.left, phi.right):
            raise UntranslatableAtom(f"cannot translate {phi}")
        return Mem(phi.left, phi.right, star=True)
    if isinstance(phi, Eq):
        if phi.star or OMEGA in (phi.left, phi.right):
            raise UntranslatableAtom(f"cannot translate {phi}")
        return Eq(phi.left, phi.right, star=True)
    if isinstance(phi, (Suitable, Plus)):
        raise UntranslatableAtom(f"cannot translate {phi}")
    if isinstance(phi, Not):
        return Not(_translate(phi.body, literal, memo))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(_translate(phi.left, literal, memo), _translate(phi.right, literal, memo))
    if isinstance(phi, (BoundedExists, BoundedForall)):
        raise UntranslatableBoundedQuantifier(
            f"bounded quantifier over {phi.var} in {phi.bound}; rewrite it unbounded first"
        )
    body = _translate(phi.body, literal, memo)
    if isinstance(phi, Forall):
        return Forall(phi.var, Implies(Suitable(phi.var), body))
    if isinstance(phi, Exists):
        if literal:
            return Exists(phi.var, Implies(Suitable(phi.var), body))
        return Exists(phi.var, And(Suitable(phi.var), body))
    raise TypeError(phi)


def unbound(phi: Formula) -> Formula:
    """Rewrite bounded quantifiers as unbounded ones guarded by membership."""
    if isinstance(phi, Not):
        return Not(unbound(phi.body))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(unbound(phi.left), unbound(phi.right))
    if isinstance(phi, BoundedExists):
        return Exists(phi.var, And(Mem(phi.var, phi.bound), unbound(phi.body)))
    if isinstance(phi, BoundedForall):
        return Forall(phi.var, Implies(Mem(phi.var, phi.bound), unbound(phi.body)))
    if isinstance(phi, (Exists, Forall)):
        return type(phi)(phi.var, unbound(phi.body))
    return phi
