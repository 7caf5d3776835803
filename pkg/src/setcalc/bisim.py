"""Equality and membership of coded sets via multi-valued isomorphisms.

``mvi`` decides the back-and-forth relation by memoized recursion over pairs
of nodes.  Memo entries are keyed by subtree *shape* (an unordered-tree
canonical form that keeps duplicate children), so repeated subtrees are
compared once.  Collapse is never consulted here; it is the oracle the tests
compare against.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .trees import ROOT, Node, Tree

Pair = Tuple[Node, Node]
MviRelation = FrozenSet[Pair]


def shape_ids(t: Tree, table: Dict[tuple, int]) -> Dict[Node, int]:
    """Number every subtree by its shape; ``table`` is shared across trees."""
    kids = t.children()
    out: Dict[Node, int] = {}
    for node in sorted(t.nodes, key=len, reverse=True):
        key = tuple(sorted(out[node + (u,)] for u in kids[node]))
        out[node] = table.setdefault(key, len(table))
    return out


class _Bisim:
    """Shared memo for deciding back-and-forth between nodes of two trees."""

    def __init__(self, s: Tree, t: Tree):
        self.s, self.t = s, t
        table: Dict[tuple, int] = {}
        self.sid = shape_ids(s, table)
        self.tid = shape_ids(t, table)
        self.skids = s.children()
        self.tkids = t.children()
        self.memo: Dict[Tuple[int, int], bool] = {}

    def related(self, sigma: Node, tau: Node) -> bool:
        key = (self.sid[sigma], self.tid[tau])
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if key[0] == key[1]:
            # identical shapes (ids come from one shared table)
            self.memo[key] = True
            return True
        su = [sigma + (u,) for u in self.skids[sigma]]
        tv = [tau + (v,) for v in self.tkids[tau]]
        ok = all(any(self.related(a, b) for b in tv) for a in su) and all(
            any(self.related(a, b) for a in su) for b in tv
        )
        self.memo[key] = ok
        return ok

    def reachable_relation(self) -> Optional[MviRelation]:
        if not self.related(ROOT, ROOT):
            return None
        seen: Set[Pair] = {(ROOT, ROOT)}
        frontier: List[Pair] = [(ROOT, ROOT)]
        while frontier:
            sigma, tau = frontier.pop()
            for u in self.skids[sigma]:
                for v in self.tkids[tau]:
                    pair = (sigma + (u,), tau + (v,))
                    if pair not in seen and self.related(*pair):
                        seen.add(pair)
                        frontier.append(pair)
        return frozenset(seen)


def mvi(s: Tree, t: Tree) -> Optional[MviRelation]:
    """A multi-valued isomorphism from s to t, restricted to pairs reachable
    from the roots; ``None`` when none exists."""
    return _Bisim(s, t).reachable_relation()


def eq_star(s: Tree, t: Tree) -> bool:
    return _Bisim(s, t).related(ROOT, ROOT)


def in_star(s: Tree, t: Tree) -> bool:
    b = _Bisim(s, t)
    return any(b.related(ROOT, (v,)) for v in t.children()[ROOT])


def greatest_mvi(s: Tree, t: Tree) -> FrozenSet[Pair]:
    """Largest relation on S×T closed under both back-and-forth clauses.

    Computed by deleting violating pairs until nothing changes, a different
    route from the recursive decision above.  For finite trees it equals
    {(σ, τ) : T↓σ and T↓τ collapse to the same set}.
    """
    skids, tkids = s.children(), t.children()
    rel = {(a, b) for a in s.nodes for b in t.nodes}
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            sa = [a + (u,) for u in skids[a]]
            tb = [b + (v,) for v in tkids[b]]
            if not (
                all(any((x, y) in rel for y in tb) for x in sa)
                and all(any((x, y) in rel for x in sa) for y in tb)
            ):
                rel.discard((a, b))
                changed = True
    return frozenset(rel)


def check_mvi(s: Tree, t: Tree, rel: FrozenSet[Pair], biconditional: bool = False) -> List[str]:
    """List every way ``rel`` fails to be a multi-valued isomorphism.

    Clause 1: the root pair is present.  Clause 2: every pair satisfies both
    directions of back-and-forth inside ``rel``.  With ``biconditional`` the
    converse of clause 2 is also checked over all of S×T.
    """
    problems = []
    skids, tkids = s.children(), t.children()
    if (ROOT, ROOT) not in rel:
        problems.append("clause 1: root pair missing")

    def forth(a, b):
        sa = [a + (u,) for u in skids[a]]
        tb = [b + (v,) for v in tkids[b]]
        return all(any((x, y) in rel for y in tb) for x in sa)

    def back(a, b):
        sa = [a + (u,) for u in skids[a]]
        tb = [b + (v,) for v in tkids[b]]
        return all(any((x, y) in rel for x in sa) for y in tb)

    for a, b in rel:
        if a not in s.nodes or b not in t.nodes:
            problems.append(f"pair {(a, b)} outside S×T")
            continue
        if not forth(a, b):
            problems.append(f"clause 2(a) fails at {(a, b)}")
        if not back(a, b):
            problems.append(f"clause 2(b) fails at {(a, b)}")
    if biconditional:
        for a in s.nodes:
            for b in t.nodes:
                if (a, b) not in rel and forth(a, b) and back(a, b):
                    problems.append(f"clause 2 converse fails at {(a, b)}")
    return problems
