"""Desk-scale H(X): unions of transitive surjective images of members of X."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Set, Tuple

from .errors import RankBoundExceeded, SizeBoundExceeded
from .flatcode import decode_pair, disjoint_union
from .kernel import (
    EMPTY,
    HFSet,
    enumerate_v,
    find_surjection,
    mk_set,
    nat,
    rank,
    singleton,
    trcl,
)

MAX_H_RANK = 4
MAX_THETA_DOMAIN = 8


def theta(S: HFSet) -> int:
    """sup of the ordinals that are surjective images of S, by search.

    Onto maps S→α for α = 1, 2, ... are searched until one is missing; a gap
    cannot be followed by a hit because α+1 maps onto α.
    """
    if len(S) > MAX_THETA_DOMAIN:
        raise SizeBoundExceeded(f"theta enumerates maps from at most {MAX_THETA_DOMAIN} points")
    best = 0 if find_surjection(S, EMPTY) is not None else None
    alpha = 1
    while find_surjection(S, nat(alpha)) is not None:
        best = alpha
        alpha += 1
    return best if best is not None else 0


_transitive_cache: Dict[int, List[HFSet]] = {}


def transitive_sets(rank_bound: int) -> List[HFSet]:
    """Every transitive subset of V_rank_bound."""
    if rank_bound > MAX_H_RANK:
        raise RankBoundExceeded(f"H(X) is materialized only up to rank {MAX_H_RANK}")
    if rank_bound in _transitive_cache:
        return _transitive_cache[rank_bound]
    universe = enumerate_v(rank_bound)
    index = {x: i for i, x in enumerate(universe)}
    need = [sum(1 << index[y] for y in x) for x in universe]
    found = []
    for mask in range(1 << len(universe)):
        ok = True
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            if need[i] & ~mask:
                ok = False
                break
            m ^= low
        if ok:
            found.append(mk_set(x for i, x in enumerate(universe) if mask >> i & 1))
    _transitive_cache[rank_bound] = found
    return found


@dataclass(frozen=True)
class HUniverse:
    base: FrozenSet[HFSet]
    rank_bound: int
    members: FrozenSet[HFSet]
    # each transitive image found, with the base element witnessing it
    images: Tuple[Tuple[HFSet, HFSet], ...]

    def __contains__(self, a: object) -> bool:
        return a in self.members


def h_of(X: Iterable[HFSet], rank_bound: int) -> HUniverse:
    """H(X) truncated to transitive images of rank below ``rank_bound``."""
    X = frozenset(X)
    members: Set[HFSet] = set()
    images = []
    for M in transitive_sets(rank_bound):
        for S in sorted(X):
            if find_surjection(S, M) is not None:
                members.update(M)
                images.append((M, S))
                break
    return HUniverse(X, rank_bound, frozenset(members), tuple(images))


def is_in_h(a: HFSet, X: Iterable[HFSet]) -> bool:
    """Decide a ∈ H(X).

    If a lies in some transitive image M of S, trcl({a}) ⊆ M is an image of
    S too, and it has rank rank(a)+1; so searching below rank(a)+2 is
    complete.
    """
    return a in h_of(X, rank(a) + 2).members


def pairing_witness(
    a: HFSet, b: HFSet, S0: HFSet, S1: HFSet
) -> Optional[Tuple[HFSet, Dict[HFSet, HFSet]]]:
    """Build the domain D = (S0 ⊔ S1) ⊔ 1 and the map g : D → trcl({{a,b}}).

    Uses surjections S0 → trcl({a}) and S1 → trcl({b}); returns None if
    either is missing.  The caller checks that g is onto.
    """
    f0 = find_surjection(S0, trcl(singleton(a)))
    f1 = find_surjection(S1, trcl(singleton(b)))
    if f0 is None or f1 is None:
        return None
    inner = disjoint_union(S0, S1)
    D = disjoint_union(inner, nat(1))
    pair_set = mk_set([a, b])
    g: Dict[HFSet, HFSet] = {}
    for y in D:
        tag, rest = decode_pair(y)
        if tag is nat(0):
            tag2, x = decode_pair(rest)
            g[y] = f0[x] if tag2 is nat(0) else f1[x]
        elif rest is EMPTY:
            g[y] = pair_set
        else:
            g[y] = EMPTY
    return D, g


def collection_subrelation(R: Iterable[Tuple[Hashable, Hashable]]) -> FrozenSet[Tuple[Hashable, Hashable]]:
    """Keep one pair per domain point: the first in sorted order.

    Trivial at finite scale; the point is the contract dom S = dom R with
    S ⊆ R and ran S finite.
    """
    chosen: Dict[Hashable, Hashable] = {}
    for x, y in sorted(R, key=_sort_key):
        chosen.setdefault(x, y)
    return frozenset(chosen.items())


def _sort_key(pair):
    return tuple((0, p.key) if isinstance(p, HFSet) else (1, repr(p)) for p in pair)
