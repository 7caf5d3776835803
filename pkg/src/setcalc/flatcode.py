"""Flat (rank-preserving) pairs and tuples.

A tuple element lives in coordinate ``k`` when its even-natural members are
exactly the markers ``{0, 2, ..., 2k-2}``; everything else in it is an
``s``-image.  ``s`` doubles-plus-one on naturals and fixes everything else,
so it never produces an even natural and the marker count is unambiguous.

Caveat: a trailing empty coordinate contributes nothing, so
``flat_tuple([1, 0]) == flat_tuple([1])``.  Length and injectivity only hold
at fixed arity or when the last coordinate is nonempty.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NotATupleAtArity, SizeBoundExceeded
from .kernel import EMPTY, HFSet, is_natural, mk_set, nat, set_to_nat

MAX_FIN_TUPLES = 200_000


def s_fn(x: HFSet) -> HFSet:
    """2x+1 on naturals, identity elsewhere."""
    if is_natural(x):
        return nat(2 * set_to_nat(x) + 1)
    return x


def s_inverse(v: HFSet) -> Optional[HFSet]:
    """The unique x with s(x) = v, or None when v is an even natural."""
    if is_natural(v):
        n = set_to_nat(v)
        return nat(n // 2) if n % 2 else None
    return v


def f_tuple(k: int, a: HFSet) -> HFSet:
    return mk_set([s_fn(x) for x in a] + [nat(2 * i) for i in range(k)])


def f_pair0(a: HFSet) -> HFSet:
    return f_tuple(0, a)


def f_pair1(a: HFSet) -> HFSet:
    return f_tuple(1, a)


def marker_count(e: HFSet) -> Optional[int]:
    """k when the even naturals of ``e`` are exactly {2i : i < k}, else None."""
    evens = sorted(set_to_nat(x) for x in e if is_natural(x) and set_to_nat(x) % 2 == 0)
    for i, v in enumerate(evens):
        if v != 2 * i:
            return None
    return len(evens)


def unmark(e: HFSet) -> Tuple[int, HFSet]:
    """Invert one ``f_k``: return (k, y) with f_k(y) = e.

    Raises NotATupleAtArity when ``e`` is not in the range of any f_k.
    """
    k = marker_count(e)
    if k is None:
        raise NotATupleAtArity(f"{e} has a gap in its even markers")
    ys = []
    for x in e:
        if is_natural(x) and set_to_nat(x) % 2 == 0:
            continue
        y = s_inverse(x)
        assert y is not None
        ys.append(y)
    return k, mk_set(ys)


def flat_tuple(xs: Sequence[HFSet]) -> HFSet:
    return mk_set(f_tuple(k, y) for k, x in enumerate(xs) for y in x)


def flat_pair(a: HFSet, b: HFSet) -> HFSet:
    return mk_set([f_pair0(x) for x in a] + [f_pair1(y) for y in b])


def decode_tuple(sigma: HFSet, n: int) -> List[HFSet]:
    """The unique length-``n`` list whose flat tuple is ``sigma``."""
    coords: List[List[HFSet]] = [[] for _ in range(n)]
    for e in sigma:
        k, y = unmark(e)
        if k >= n:
            raise NotATupleAtArity(f"element {e} sits in coordinate {k}, arity is {n}")
        coords[k].append(y)
    return [mk_set(c) for c in coords]


def try_decode_tuple(sigma: HFSet, n: int) -> Optional[List[HFSet]]:
    try:
        return decode_tuple(sigma, n)
    except NotATupleAtArity:
        return None


def _proj(p: HFSet, index: int) -> HFSet:
    # f_i-preimage of p's members; other members are ignored
    out = []
    for e in p:
        k = marker_count(e)
        if k != index:
            continue
        _, y = unmark(e)
        out.append(y)
    return mk_set(out)


def proj0(p: HFSet) -> HFSet:
    return _proj(p, 0)


def proj1(p: HFSet) -> HFSet:
    return _proj(p, 1)


def decode_pair(p: HFSet) -> Optional[Tuple[HFSet, HFSet]]:
    """(a, b) with flat_pair(a, b) == p, or None if p is not a pair code."""
    xs = try_decode_tuple(p, 2)
    if xs is None:
        return None
    return xs[0], xs[1]


def lh(sigma: HFSet) -> int:
    """1 + the least m with 2m in no member of sigma; 0 for the empty set.

    For finite sigma the minimum always exists (m = max member size works),
    so the 'no minimum' clause never fires at this scale.
    """
    if not sigma:
        return 0
    bound = max(len(y) for y in sigma) + 1
    for m in range(bound + 1):
        marker = nat(2 * m)
        if all(marker not in y for y in sigma):
            return m + 1
    return 0


def g_fn(e: HFSet) -> int:
    """Least n with 2n not in e."""
    for n in range(len(e) + 1):
        if nat(2 * n) not in e:
            return n
    return 0


def varsigma(m: int, e: HFSet) -> HFSet:
    """Shift a tuple element m coordinates to the right by adding markers."""
    top = m + g_fn(e)
    return mk_set(list(e) + [nat(2 * k) for k in range(top)])


def concat(sigma: HFSet, tau: HFSet) -> HFSet:
    m = lh(sigma)
    return mk_set(list(sigma) + [varsigma(m, y) for y in tau])


def flat_prod(A: HFSet, B: HFSet) -> HFSet:
    return mk_set(flat_pair(x, y) for x in A for y in B)


def fin(A: HFSet, max_len: int) -> HFSet:
    """All flat tuples over A of arity at most ``max_len`` (the empty tuple included)."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    total = sum(len(A) ** n for n in range(max_len + 1))
    if total > MAX_FIN_TUPLES:
        raise SizeBoundExceeded(f"fin would build {total} tuples")
    out = {EMPTY}
    layer: List[Tuple[HFSet, ...]] = [()]
    for _ in range(max_len):
        layer = [t + (x,) for t in layer for x in A]
        out.update(flat_tuple(t) for t in layer)
    return mk_set(out)


def _pairs(a: HFSet):
    for z in a:
        xy = decode_pair(z)
        if xy is not None:
            yield xy


def dom(a: HFSet) -> HFSet:
    return mk_set(x for x, _ in _pairs(a))


def ran(a: HFSet) -> HFSet:
    return mk_set(y for _, y in _pairs(a))


def slice_(a: HFSet, i: HFSet) -> HFSet:
    """(a)_i: everything paired with index i inside a."""
    return mk_set(y for x, y in _pairs(a) if x is i)


def slices(a: HFSet, b: HFSet) -> HFSet:
    return mk_set(slice_(a, i) for i in b)


def inj0(x: HFSet) -> HFSet:
    return flat_pair(nat(0), x)


def inj1(y: HFSet) -> HFSet:
    return flat_pair(nat(1), y)


def disjoint_union(a: HFSet, b: HFSet) -> HFSet:
    return mk_set([inj0(x) for x in a] + [inj1(y) for y in b])


def encode_family(family: Dict[HFSet, HFSet]) -> HFSet:
    """Encode {i: F(i)} as the relation {flat_pair(i, x) : x in F(i)}."""
    return mk_set(flat_pair(i, x) for i, xs in family.items() for x in xs)

