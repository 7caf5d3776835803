"""Coding trees and their transitive collapse.

Nodes are plain tuples of HFSet labels.  The flat-tuple encoding of a node
is only a serialization: with the label 0 the encoding is not injective
(``⌈0⌉ = ⌈⌉``), so all tree algorithms work on the tuples directly.
"""

from __future__ import annotations

import json
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .errors import (
    AmbiguousFlatEncoding,
    LabelOutsideUniverse,
    NodeNotInTree,
    NotATupleAtArity,
    NotOntoTransitiveClosure,
    SizeBoundExceeded,
    TreeFormatError,
)
from .flatcode import decode_tuple, flat_tuple, lh
from .kernel import EMPTY, HFSet, mk_set, nat, parse_set, print_set, trcl

Node = Tuple[HFSet, ...]
ROOT: Node = ()

MAX_WF_NODES = 15


class Tree:
    """A finite, prefix-closed set of label sequences containing the root.

    Finite trees are automatically well-founded, so every ``Tree`` is
    suitable.  ``labels`` is the label universe; it may contain labels that
    no node uses.
    """

    __slots__ = ("nodes", "labels", "_children", "_hash")

    def __init__(self, nodes: FrozenSet[Node], labels: FrozenSet[HFSet]):
        self.nodes = nodes
        self.labels = labels
        self._children: Optional[Dict[Node, Tuple[HFSet, ...]]] = None
        self._hash = hash((nodes, labels))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.nodes == other.nodes and self.labels == other.labels

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node: object) -> bool:
        return node in self.nodes

    def __repr__(self) -> str:
        return f"Tree({sorted_nodes_text(self)})"

    def children(self) -> Dict[Node, Tuple[HFSet, ...]]:
        """Map each node to its successor labels, in canonical label order."""
        if self._children is None:
            kids: Dict[Node, List[HFSet]] = {n: [] for n in self.nodes}
            for n in self.nodes:
                if n:
                    kids[n[:-1]].append(n[-1])
            self._children = {n: tuple(sorted(v)) for n, v in kids.items()}
        return self._children

    def sorted_nodes(self) -> List[Node]:
        return sorted(self.nodes, key=_node_key)


def _node_key(node: Node):
    return (len(node), tuple(x.key for x in node))


def sorted_nodes_text(t: Tree) -> str:
    return "; ".join("/".join(print_set(x) for x in n) for n in t.sorted_nodes())


def mk_tree(paths: Iterable[Iterable[HFSet]], labels: Optional[Iterable[HFSet]] = None) -> Tree:
    """Prefix-close ``paths`` (plus the root) into a tree over ``labels``.

    With ``labels`` omitted the universe is the set of labels actually used.
    """
    nodes = {ROOT}
    used = set()
    for p in paths:
        p = tuple(p)
        used.update(p)
        for i in range(1, len(p) + 1):
            nodes.add(p[:i])
    if labels is None:
        universe = frozenset(used)
    else:
        universe = frozenset(labels)
        stray = used - universe
        if stray:
            shown = ", ".join(sorted(print_set(x) for x in stray))
            raise LabelOutsideUniverse(f"labels outside the universe: {shown}")
    return Tree(frozenset(nodes), universe)


def is_suitable(t: Tree) -> bool:
    # finite trees are well-founded
    return ROOT in t.nodes


def wf_predicate_check(t: Tree) -> bool:
    """Evaluate the subset form of well-foundedness literally.

    Every nonempty Z ⊆ T must contain a node none of whose one-step
    extensions lies in Z.
    """
    nodes = t.sorted_nodes()
    n = len(nodes)
    if n > MAX_WF_NODES:
        raise SizeBoundExceeded(f"{n} nodes exceeds the {MAX_WF_NODES}-node subset check")
    index = {node: i for i, node in enumerate(nodes)}
    kids = t.children()
    child_masks = []
    for node in nodes:
        m = 0
        for u in kids[node]:
            m |= 1 << index[node + (u,)]
        child_masks.append(m)
    for z in range(1, 1 << n):
        if not any(z >> i & 1 and not (child_masks[i] & z) for i in range(n)):
            return False
    return True


def _require(t: Tree, sigma: Node) -> None:
    if sigma not in t.nodes:
        raise NodeNotInTree(f"node {'/'.join(map(print_set, sigma)) or '<root>'} not in tree")


def subtree(t: Tree, sigma: Node) -> Tree:
    sigma = tuple(sigma)
    _require(t, sigma)
    k = len(sigma)
    return Tree(frozenset(n[k:] for n in t.nodes if n[:k] == sigma), t.labels)


def successors(t: Tree, sigma: Node) -> FrozenSet[HFSet]:
    sigma = tuple(sigma)
    _require(t, sigma)
    return frozenset(t.children()[sigma])


def collapse_map(t: Tree) -> Dict[Node, HFSet]:
    """Tcoll of every subtree T↓σ, computed leaves-first."""
    kids = t.children()
    out: Dict[Node, HFSet] = {}
    for node in sorted(t.nodes, key=len, reverse=True):
        out[node] = mk_set(out[node + (u,)] for u in kids[node])
    return out


def tcoll(t: Tree) -> HFSet:
    return collapse_map(t)[ROOT]


def canonical_tree(a: HFSet, f: Mapping[HFSet, HFSet]) -> Tree:
    """Tree of f-labelled descending membership chains below ``a``.

    ``f`` must map its domain (the label universe) onto trcl(a).
    """
    target = trcl(a)
    image = frozenset(f.values())
    if image != target.members:
        raise NotOntoTransitiveClosure(
            f"image {print_set(mk_set(image))} is not trcl({print_set(a)}) = {print_set(target)}"
        )
    labels = sorted(f)
    nodes = {ROOT}
    stack: List[Tuple[Node, HFSet]] = [(ROOT, a)]
    while stack:
        node, current = stack.pop()
        for u in labels:
            v = f[u]
            if v in current:
                child = node + (u,)
                nodes.add(child)
                stack.append((child, v))
    return Tree(frozenset(nodes), frozenset(f))


def node_label(node: Node) -> HFSet:
    """Injective label for a node: the flat tuple of the singletons of its entries.

    Wrapping entries in singletons keeps every coordinate nonempty, so the
    flat encoding cannot drop a trailing ``0``.
    """
    return flat_tuple([mk_set([x]) for x in node])


def label_node(label: HFSet) -> Node:
    coords = decode_tuple(label, lh(label))
    out = []
    for c in coords:
        if len(c) != 1:
            raise NotATupleAtArity(f"{print_set(label)} is not a node label")
        out.append(c.children[0])
    return tuple(out)


def trcl_tree(t: Tree) -> Tree:
    """T′: one root branch per nonempty node σ of T, carrying T↓σ.

    Its collapse is the transitive closure of tcoll(T).
    """
    nodes = {ROOT}
    labels = set()
    for sigma in t.nodes:
        if not sigma:
            continue
        lab = node_label(sigma)
        labels.add(lab)
        k = len(sigma)
        for n in t.nodes:
            if n[:k] == sigma:
                nodes.add((lab,) + n[k:])
                labels.update(n[k:])
    return Tree(frozenset(nodes), frozenset(labels))


def singleton_tree(t: Tree) -> Tree:
    """T″: T hung below a new root edge labelled 0; collapses to {tcoll(T)}."""
    zero = EMPTY
    nodes = {ROOT} | {(zero,) + n for n in t.nodes}
    return Tree(frozenset(nodes), t.labels | {zero})


def join_tree(branches: Mapping[HFSet, Tree]) -> Tree:
    nodes = {ROOT}
    labels = set(branches)
    for x, sub in branches.items():
        labels.update(sub.labels)
        nodes.update((x,) + n for n in sub.nodes)
    return Tree(frozenset(nodes), frozenset(labels))


def relabel(t: Tree, pi: Mapping[HFSet, HFSet]) -> Tree:
    """Apply a label map to every entry; labels outside ``pi`` stay fixed."""
    def m(x):
        return pi.get(x, x)

    return Tree(frozenset(tuple(m(x) for x in n) for n in t.nodes), frozenset(m(x) for x in t.labels))


# --- flat encoding -----------------------------------------------------------


def encode_tree(t: Tree) -> HFSet:
    """The set of flat-tuple codes of the nodes.

    Refuses trees that use the label 0, whose flat code collides with a
    shorter node.
    """
    for n in t.nodes:
        if any(not x for x in n):
            raise AmbiguousFlatEncoding("label 0 makes the flat node encoding ambiguous")
    return mk_set(flat_tuple(n) for n in t.nodes)


def decode_tree(a: HFSet, labels: Iterable[HFSet]) -> Tree:
    labels = frozenset(labels)
    if EMPTY in labels:
        raise AmbiguousFlatEncoding("label 0 makes the flat node encoding ambiguous")
    nodes = set()
    for e in a:
        coords = decode_tuple(e, lh(e))
        for c in coords:
            if c not in labels:
                raise LabelOutsideUniverse(f"{print_set(c)} is not a label")
        nodes.add(tuple(coords))
    if ROOT not in nodes:
        raise TreeFormatError("encoded set lacks the empty tuple")
    for n in nodes:
        if n and n[:-1] not in nodes:
            raise TreeFormatError("encoded set is not closed under initial segments")
    return Tree(frozenset(nodes), labels)


def try_decode_tree(a: HFSet, labels: Iterable[HFSet]) -> Optional[Tree]:
    try:
        return decode_tree(a, labels)
    except (NotATupleAtArity, LabelOutsideUniverse, TreeFormatError, AmbiguousFlatEncoding):
        return None


# --- text and JSON forms -----------------------------------------------------


def print_tree(t: Tree) -> str:
    """One node per line, entries joined by '/', root line empty.

    A ``# labels:`` header is written when the universe has unused labels.
    """
    used = {x for n in t.nodes for x in n}
    lines = []
    if used != set(t.labels):
        lines.append("# labels: " + " ".join(print_set(x) for x in sorted(t.labels)))
    lines.extend("/".join(print_set(x) for x in n) for n in t.sorted_nodes())
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> Tree:
    """Inverse of :func:`print_tree`.  ``;`` also separates nodes, for inline use."""
    stripped = text.strip()
    if stripped.startswith("{") and '"nodes"' in stripped:
        return tree_from_json(json.loads(stripped))
    labels = None
    paths = []
    for raw in text.replace(";", "\n").split("\n"):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("labels:"):
                labels = [parse_set(tok) for tok in body[len("labels:"):].split()]
            continue
        if not line:
            continue
        try:
            paths.append(tuple(parse_set(tok) for tok in line.split("/")))
        except Exception as exc:
            raise TreeFormatError(f"bad tree line {line!r}: {exc}") from exc
    if labels is None:
        return mk_tree(paths)
    return mk_tree(paths, labels)


def tree_to_json(t: Tree) -> dict:
    return {
        "labels": [print_set(x) for x in sorted(t.labels)],
        "nodes": [[print_set(x) for x in n] for n in t.sorted_nodes()],
    }


def tree_from_json(doc: dict) -> Tree:
    try:
        labels = [parse_set(x) for x in doc["labels"]]
        paths = [[parse_set(x) for x in n] for n in doc["nodes"]]
    except (KeyError, TypeError) as exc:
        raise TreeFormatError(f"malformed tree document: {exc}") from exc
    return mk_tree(paths, labels)


def code_of(a: HFSet, labels: Optional[List[HFSet]] = None) -> Tree:
    """A canonical tree for ``a`` labelling trcl(a) by 1, 2, ... in canonical order."""
    members = list(trcl(a))
    if labels is None:
        labels = [nat(i + 1) for i in range(len(members))]
    return canonical_tree(a, dict(zip(labels, members)))
