"""Hereditarily finite sets with global hash-consing.

Every HFSet is interned: building the same extensional set twice returns the
same object, so ``==`` and ``hash`` are plain identity.  Children are kept in
a canonical order (by rank, then recursively by their own children), which
makes printing and iteration deterministic.

>>> print_set(mk_set([nat(0), nat(1)]))
'2'
>>> print_set(mk_set([mk_set([nat(1)])]))
'{{1}}'
"""

from __future__ import annotations

import itertools
import threading
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .errors import (
    NotANatural,
    RankBoundExceeded,
    SetSyntaxError,
    SizeBoundExceeded,
)

__all__ = [
    "HFSet",
    "mk_set",
    "EMPTY",
    "nat",
    "rank",
    "trcl",
    "is_transitive",
    "is_natural",
    "nat_to_set",
    "set_to_nat",
    "enumerate_v",
    "parse_set",
    "print_set",
    "surjections",
    "exists_surjection",
    "union",
    "big_union",
    "singleton",
]

MAX_ENUM_RANK = 5
MAX_SURJECTION_MAPS = 2_000_000
MAX_SURJECTION_DOMAIN = 16


class HFSet:
    """An interned, immutable hereditarily finite set.

    Do not instantiate directly; use :func:`mk_set`.
    """

    __slots__ = ("_children", "_members", "_rank", "_key", "_nat", "__weakref__")

    _children: Tuple["HFSet", ...]
    _members: frozenset
    _rank: int
    _key: tuple
    _nat: int

    def __iter__(self) -> Iterator["HFSet"]:
        return iter(self._children)

    def __len__(self) -> int:
        return len(self._children)

    def __contains__(self, item: object) -> bool:
        return item in self._members

    def __bool__(self) -> bool:
        return bool(self._children)

    def __lt__(self, other: "HFSet") -> bool:
        return self._key < other._key

    def __le__(self, other: "HFSet") -> bool:
        return self._key <= other._key

    def __gt__(self, other: "HFSet") -> bool:
        return self._key > other._key

    def __ge__(self, other: "HFSet") -> bool:
        return self._key >= other._key

    def __repr__(self) -> str:
        return f"HFSet({print_set(self)})"

    def __str__(self) -> str:
        return print_set(self)

    def __reduce__(self):
        return (mk_set, (list(self._children),))

    @property
    def children(self) -> Tuple["HFSet", ...]:
        return self._children

    @property
    def members(self) -> frozenset:
        return self._members

    @property
    def key(self) -> tuple:
        """Canonical sort key; equal keys iff equal sets."""
        return self._key

    def issubset(self, other: "HFSet") -> bool:
        return self._members <= other._members


_intern: Dict[frozenset, HFSet] = {}
_intern_lock = threading.Lock()


def mk_set(children: Iterable[HFSet] = ()) -> HFSet:
    """Return the canonical set whose members are exactly ``children``."""
    members = frozenset(children)
    found = _intern.get(members)
    if found is not None:
        return found
    with _intern_lock:
        found = _intern.get(members)
        if found is not None:
            return found
        for c in members:
            if not isinstance(c, HFSet):
                raise TypeError(f"HFSet children must be HFSet, got {type(c).__name__}")
        ordered = tuple(sorted(members, key=lambda c: c._key))
        obj = object.__new__(HFSet)
        obj._children = ordered
        obj._members = members
        obj._rank = 1 + ordered[-1]._rank if ordered else 0
        # descending child keys: the largest child decides first
        obj._key = (obj._rank, tuple(c._key for c in reversed(ordered)))
        obj._nat = _natural_value(ordered)
        _intern[members] = obj
        return obj


def _natural_value(ordered: Tuple[HFSet, ...]) -> int:
    for i, c in enumerate(ordered):
        if c._nat != i:
            return -1
    return len(ordered)


EMPTY = mk_set()

_nat_cache: List[HFSet] = [EMPTY]


def nat(n: int) -> HFSet:
    """The von Neumann natural ``n``."""
    if n < 0:
        raise ValueError("naturals are non-negative")
    while len(_nat_cache) <= n:
        prev = _nat_cache[-1]
        _nat_cache.append(mk_set(prev._children + (prev,)))
    return _nat_cache[n]


nat_to_set = nat


def singleton(a: HFSet) -> HFSet:
    return mk_set([a])


def union(*sets: HFSet) -> HFSet:
    return mk_set(itertools.chain.from_iterable(s._children for s in sets))


def big_union(a: HFSet) -> HFSet:
    return union(*a._children)


def rank(a: HFSet) -> int:
    return a._rank


def is_natural(a: HFSet) -> bool:
    return a._nat >= 0


def set_to_nat(a: HFSet) -> int:
    if a._nat < 0:
        raise NotANatural(f"{print_set(a)} is not a von Neumann natural")
    return a._nat


def trcl(a: HFSet) -> HFSet:
    """Transitive closure: every set reachable from ``a`` by membership."""
    seen = set()
    stack = list(a._children)
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        stack.extend(x._children)
    return mk_set(seen)


def is_transitive(a: HFSet) -> bool:
    return all(x._members <= a._members for x in a._children)


_v_cache: Dict[int, List[HFSet]] = {0: []}


def enumerate_v(r: int) -> List[HFSet]:
    """All sets of rank below ``r`` (that is, V_r), in canonical order."""
    if r < 0:
        raise ValueError("rank bound must be non-negative")
    if r > MAX_ENUM_RANK:
        raise RankBoundExceeded(f"enumerate_v supports r <= {MAX_ENUM_RANK}, got {r}")
    if r in _v_cache:
        return _v_cache[r]
    below = enumerate_v(r - 1)
    out = []
    for bits in range(1 << len(below)):
        out.append(mk_set(x for i, x in enumerate(below) if bits >> i & 1))
    out.sort(key=lambda s: s._key)
    _v_cache[r] = out
    return out


# --- text form -------------------------------------------------------------


def print_set(a: HFSet) -> str:
    if a._nat >= 0:
        return str(a._nat)
    return "{" + ",".join(print_set(c) for c in a._children) + "}"


def parse_set(text: str) -> HFSet:
    """Parse ``{...}`` literals with numeral sugar for von Neumann naturals."""
    parser = _SetParser(text)
    parser.skip_ws()
    value = parser.parse()
    parser.skip_ws()
    if parser.pos != len(text):
        raise SetSyntaxError(f"unexpected {text[parser.pos]!r}", parser.pos)
    return value


class _SetParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def parse(self) -> HFSet:
        text = self.text
        if self.pos >= len(text):
            raise SetSyntaxError("unexpected end of input", self.pos)
        ch = text[self.pos]
        if ch.isdigit():
            start = self.pos
            while self.pos < len(text) and text[self.pos].isdigit():
                self.pos += 1
            return nat(int(text[start:self.pos]))
        if ch != "{":
            raise SetSyntaxError(f"expected '{{' or numeral, found {ch!r}", self.pos)
        self.pos += 1
        self.skip_ws()
        children = []
        if self.pos < len(text) and text[self.pos] == "}":
            self.pos += 1
            return EMPTY
        while True:
            self.skip_ws()
            children.append(self.parse())
            self.skip_ws()
            if self.pos >= len(text):
                raise SetSyntaxError("unterminated set literal", self.pos)
            if text[self.pos] == ",":
                self.pos += 1
                continue
            if text[self.pos] == "}":
                self.pos += 1
                return mk_set(children)
            raise SetSyntaxError(f"expected ',' or '}}', found {text[self.pos]!r}", self.pos)


# --- surjections -------------------------------------------------------------


def surjections(S: HFSet, M: HFSet) -> Iterator[Dict[HFSet, HFSet]]:
    """Yield every map from the members of S onto the members of M."""
    dom, cod = S._children, M._children
    total = len(cod) ** len(dom)
    if len(dom) > MAX_SURJECTION_DOMAIN or total > MAX_SURJECTION_MAPS:
        raise SizeBoundExceeded(f"{len(cod)}^{len(dom)} maps exceeds the enumeration guard")
    need = M._members
    for values in itertools.product(cod, repeat=len(dom)):
        if len(set(values)) == len(need):
            yield dict(zip(dom, values))


def exists_surjection(S: HFSet, M: HFSet) -> bool:
    return find_surjection(S, M) is not None


def find_surjection(S: HFSet, M: HFSet) -> Optional[Dict[HFSet, HFSet]]:
    """Backtracking search for a map from S onto M; ``None`` if there is none.

    Prunes a branch once the unassigned domain points cannot cover the
    still-missing targets.
    """
    dom, cod = S._children, M._children
    if len(dom) > MAX_SURJECTION_DOMAIN:
        raise SizeBoundExceeded(f"domain of size {len(dom)} exceeds the search guard")
    n = len(dom)
    hits = {c: 0 for c in cod}
    missing = len(cod)
    assign: List[HFSet] = []

    def search(i: int) -> bool:
        nonlocal missing
        if n - i < missing:
            return False
        if i == n:
            return missing == 0
        # try uncovered targets first
        for c in sorted(cod, key=lambda c: hits[c] > 0):
            hits[c] += 1
            if hits[c] == 1:
                missing -= 1
            assign.append(c)
            if search(i + 1):
                return True
            assign.pop()
            hits[c] -= 1
            if hits[c] == 0:
                missing += 1
        return False

    if search(0):
        return dict(zip(dom, assign))
    return None

