"""Maps on codes and the induced maps on the sets they code.

A ``TreeMap`` sends every tree of a universe to a tree of the same
universe.  When it preserves =* and ∈* it induces j(a) = tcoll(k(T)) for any
code T of a.  Finite structures admit no nontrivial elementary self-maps, so
congruence is checked by brute force and elementarity only spot-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .bisim import in_star
from .errors import (
    NotAFamilyMember,
    NotCongruent,
    SliceNotATree,
    TreeNotInUniverse,
    UniverseNotClosed,
    WitnessNotInUniverse,
)
from .flatcode import dom, encode_family, slice_
from .folang.semantics import TruthTables, v_structure
from .folang.syntax import Formula, print_formula
from .folang.translate import translate
from .kernel import HFSet
from .trees import Tree, encode_tree, join_tree, print_tree, relabel, tcoll, try_decode_tree
from .universe import CodeUniverse


@dataclass(frozen=True)
class TreeMap:
    universe: CodeUniverse
    images: Tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != len(self.universe):
            raise ValueError("a tree map needs one image per tree")

    def __call__(self, t: Tree) -> Tree:
        if t not in self.universe:
            raise TreeNotInUniverse(f"tree {_one_line(t)} is not in the universe")
        return self.universe.trees[self.images[self.universe.position(t)]]

    @property
    def index(self) -> np.ndarray:
        return np.asarray(self.images, dtype=np.intp)


def tree_map(U: CodeUniverse, mapping: Mapping[Tree, Tree]) -> TreeMap:
    """Build a map from explicit pairs; unlisted trees are fixed."""
    images = []
    for t in U.trees:
        image = mapping.get(t, t)
        if image not in U:
            raise TreeNotInUniverse(f"image {_one_line(image)} is not in the universe")
        images.append(U.position(image))
    return TreeMap(U, tuple(images))


def identity_map(U: CodeUniverse) -> TreeMap:
    return TreeMap(U, tuple(range(len(U))))


def permutation_map(pi: Mapping[HFSet, HFSet], U: CodeUniverse) -> TreeMap:
    """Relabel every node entry by the label permutation ``pi``."""
    if set(pi) != set(pi.values()):
        raise ValueError("pi must permute its domain")
    images = []
    for t in U.trees:
        image = relabel(t, pi)
        if image not in U:
            raise UniverseNotClosed(f"relabelling {_one_line(t)} leaves the universe")
        images.append(U.position(image))
    return TreeMap(U, tuple(images))


def _one_line(t: Tree) -> str:
    return print_tree(t).strip().replace("\n", "; ") or "<root>"


# --- congruence ------------------------------------------------------------


@dataclass(frozen=True)
class Congruence:
    ok: bool
    relation: Optional[str] = None
    pair: Optional[Tuple[Tree, Tree]] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "congruent"
        s, t = self.pair
        return f"{self.relation} not preserved: S = {_one_line(s)}, T = {_one_line(t)}"


def is_congruent(k: TreeMap, U: Optional[CodeUniverse] = None) -> Congruence:
    """Check S =* T ⇒ k(S) =* k(T) and S ∈* T ⇒ k(S) ∈* k(T) over all pairs."""
    U = k.universe if U is None else U
    idx = k.index
    for name, mat in (("=*", U.eq_matrix), ("in*", U.in_matrix)):
        moved = mat[np.ix_(idx, idx)]
        broken = np.argwhere(mat & ~moved)
        if len(broken):
            i, j = broken[0]
            return Congruence(False, name, (U.trees[i], U.trees[j]))
    return Congruence(True)


def induced_j(k: TreeMap, U: CodeUniverse, T: Tree) -> HFSet:
    """j(tcoll T) = tcoll(k(T)); refuses maps that are not congruent."""
    verdict = is_congruent(k, U)
    if not verdict:
        raise NotCongruent(verdict.describe())
    return tcoll(k(T))


def induced_j_table(k: TreeMap, U: CodeUniverse) -> Dict[HFSet, HFSet]:
    """j on every collapse of U; congruence makes it single-valued."""
    verdict = is_congruent(k, U)
    if not verdict:
        raise NotCongruent(verdict.describe())
    out: Dict[HFSet, HFSet] = {}
    for t in U.trees:
        a, b = tcoll(t), tcoll(k(t))
        assert out.setdefault(a, b) is b, "congruent maps are well defined on collapses"
    return out


# --- elementarity ----------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    status: str
    counterexample: Optional[List[str]] = None
    formula: Optional[str] = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "counterexample": self.counterexample,
            "formula": self.formula,
            "detail": self.detail,
        }


@dataclass
class TransferReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    @property
    def violations(self) -> List[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            lines.append(f"{c.name}: {c.status}" + (f" ({c.detail})" if c.detail else ""))
            if c.formula:
                lines.append(f"  formula: {c.formula}")
            for t in c.counterexample or ():
                lines.append(f"  tree: {t}")
        return "\n".join(lines) + "\n"


def transfer_report(k: TreeMap, U: CodeUniverse, pool: Iterable[Formula], limit: int = 5) -> TransferReport:
    """Congruence, then elementarity of k on the translated pool.

    For each φ and each assignment ν into U, φᵗ at ν must agree with φᵗ at
    k∘ν.  Elementarity is skipped when congruence already fails.
    """
    report = TransferReport()
    verdict = is_congruent(k, U)
    if not verdict:
        s, t = verdict.pair
        report.checks.append(
            CheckResult("congruence", "fail", [_one_line(s), _one_line(t)], None, verdict.describe())
        )
        report.checks.append(CheckResult("elementarity", "skipped", detail="map is not congruent"))
        return report
    report.checks.append(CheckResult("congruence", "pass"))
    M = v_structure(U)
    tables = TruthTables(M)
    idx = k.index
    memo: dict = {}
    seen = 0
    failures = 0
    for phi in pool:
        t = translate(phi, memo=memo)
        names, arr = tables.table(t)
        seen += 1
        moved = arr[np.ix_(*([idx] * len(names)))] if names else arr
        bad = np.argwhere(arr != moved)
        if len(bad):
            failures += 1
            if failures <= limit:
                point = bad[0]
                trees = [f"{v} = {_one_line(U.trees[i])}" for v, i in zip(names, point)]
                report.checks.append(
                    CheckResult("elementarity", "fail", trees, print_formula(phi), "truth changes under k")
                )
    if not failures:
        report.checks.append(CheckResult("elementarity", "pass", detail=f"{seen} formulas"))
    return report


def check_elementarity(k: TreeMap, U: CodeUniverse, pool: Iterable[Formula]) -> TransferReport:
    """As :func:`transfer_report`, but a map that is not congruent is an error."""
    verdict = is_congruent(k, U)
    if not verdict:
        err = NotCongruent(verdict.describe())
        err.report = transfer_report(k, U, ())
        raise err
    return transfer_report(k, U, pool)


def is_identity_on_collapses(k: TreeMap, U: CodeUniverse) -> bool:
    return all(tcoll(t) is tcoll(k(t)) for t in U.trees)


# --- cofinality ------------------------------------------------------------


def family_code(family: Mapping[HFSet, Tree]) -> HFSet:
    """c with (c)_x = encode_tree(family[x])."""
    return encode_family({x: encode_tree(t) for x, t in family.items()})


def decode_family(c: HFSet, labels: Iterable[HFSet]) -> Dict[HFSet, Tree]:
    """The slices of c that decode as trees over ``labels``; the rest are dropped."""
    labels = frozenset(labels)
    out = {}
    for x in dom(c):
        t = try_decode_tree(slice_(c, x), labels)
        if t is not None:
            out[x] = t
    return out


def transport(k: TreeMap, c: HFSet, labels: Iterable[HFSet]) -> HFSet:
    """k acting on an encoded family: decode each slice, apply k, re-encode."""
    family = decode_family(c, labels)
    moved = {}
    for x, t in family.items():
        if t not in k.universe:
            raise WitnessNotInUniverse(f"slice {x} decodes to a tree outside the universe")
        moved[x] = k(t)
    return family_code(moved)


def cofinal_witness(t: Tree, c: HFSet, k: TreeMap, U: CodeUniverse) -> Tree:
    """The slice-join tree t′ of c, with t ∈* k(t′) to be checked by the caller.

    Preconditions: some slice of k'(c) is the encoding of t, where k' is k
    moved onto encoded families; and t′ lies in U so k applies to it.
    """
    labels = t.labels
    family = decode_family(c, labels)
    if not family:
        raise SliceNotATree("no slice of c decodes as a tree")
    image = transport(k, c, labels)
    target = encode_tree(t)
    if not any(slice_(image, x) is target for x in dom(image)):
        raise NotAFamilyMember("t is not a slice of k'(c)")
    witness = join_tree(family)
    if witness not in U:
        raise WitnessNotInUniverse("the slice-join tree is not in the universe")
    return witness


def cofinality_holds(t: Tree, c: HFSet, k: TreeMap, U: CodeUniverse) -> bool:
    return in_star(t, k(cofinal_witness(t, c, k, U)))


def decode_slices(c: HFSet, labels: Sequence[HFSet]) -> List[Tuple[HFSet, Optional[Tree]]]:
    """Every slice with its decoded tree, ``None`` where decoding fails."""
    return [(x, try_decode_tree(slice_(c, x), labels)) for x in dom(c)]


__all__ = [
    "CheckResult",
    "Congruence",
    "TransferReport",
    "TreeMap",
    "check_elementarity",
    "cofinal_witness",
    "cofinality_holds",
    "decode_family",
    "decode_slices",
    "family_code",
    "identity_map",
    "induced_j",
    "induced_j_table",
    "is_congruent",
    "is_identity_on_collapses",
    "permutation_map",
    "transfer_report",
    "transport",
    "tree_map",
]
