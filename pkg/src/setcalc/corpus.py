"""Reproducible test material: small trees, random trees, code universes."""

from __future__ import annotations

import random
from functools import lru_cache
from typing import List, Sequence, Tuple

from .kernel import HFSet, nat
from .trees import ROOT, Tree, tcoll
from .universe import CodeUniverse, mk_universe

CORPUS_SEED = 1729
LABELS: Tuple[HFSet, ...] = (nat(1), nat(2))


@lru_cache(maxsize=None)
def small_trees(max_nodes: int = 6, labels: Tuple[HFSet, ...] = LABELS) -> Tuple[Tree, ...]:
    """Every tree over ``labels`` with at most ``max_nodes`` nodes."""
    universe = frozenset(labels)
    frontier = {frozenset([ROOT])}
    found = set(frontier)
    for _ in range(max_nodes - 1):
        nxt = set()
        for nodes in frontier:
            for node in nodes:
                for u in labels:
                    child = node + (u,)
                    if child not in nodes:
                        nxt.add(nodes | {child})
        nxt -= found
        found |= nxt
        frontier = nxt
    trees = [Tree(n, universe) for n in found]
    trees.sort(key=lambda t: (len(t), sorted(tuple(x.key for x in n) for n in t.nodes)))
    return tuple(trees)


def random_tree(rng: random.Random, max_nodes: int, labels: Sequence[HFSet] = LABELS) -> Tree:
    """Grow a tree by adding random free children until the target size."""
    target = rng.randint(1, max_nodes)
    nodes = {ROOT}
    open_slots = [(ROOT, u) for u in labels]
    while len(nodes) < target and open_slots:
        node, u = open_slots.pop(rng.randrange(len(open_slots)))
        child = node + (u,)
        nodes.add(child)
        open_slots.extend((child, v) for v in labels)
    return Tree(frozenset(nodes), frozenset(labels))


def random_trees(count: int, max_nodes: int = 12, seed: int = CORPUS_SEED) -> List[Tree]:
    rng = random.Random(seed)
    return [random_tree(rng, max_nodes) for _ in range(count)]


def sample_universes(count: int = 60, max_trees: int = 8, seed: int = CORPUS_SEED) -> List[CodeUniverse]:
    """Random universes of 1..max_trees corpus trees.

    Every fourth universe is seeded with a pair of distinct trees that share
    a collapse, so the =* classes are not all singletons.
    """
    rng = random.Random(seed)
    corpus = small_trees()
    twins = _collapse_twins(corpus)
    out = []
    for i in range(count):
        k = rng.randint(1, max_trees)
        chosen = rng.sample(corpus, k)
        if i % 4 == 0 and k >= 2:
            chosen[:2] = rng.choice(twins)
        out.append(mk_universe(chosen))
    return out


def _collapse_twins(corpus: Sequence[Tree]) -> List[Tuple[Tree, Tree]]:
    first = {}
    pairs = []
    for t in corpus:
        a = tcoll(t)
        if a in first:
            pairs.append((first[a], t))
        else:
            first[a] = t
    return pairs
