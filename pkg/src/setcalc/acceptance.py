"""The acceptance suites, as plain functions.

Each suite returns a :class:`SuiteResult`; a suite passes only when every
check holds and it finishes inside its time limit.  ``setcalc selftest`` and
the pytest acceptance module both call these.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .bisim import eq_star, in_star
from .corpus import CORPUS_SEED, LABELS, random_trees, sample_universes, small_trees
from .errors import SetCalcError
from .flatcode import (
    concat,
    decode_pair,
    decode_tuple,
    f_tuple,
    flat_pair,
    flat_tuple,
    lh,
    proj0,
    proj1,
    varsigma,
)
from .folang import BUILTIN_NAMES, builtin_arguments, builtin_formula, direct_relation, hf_structure, is_delta0
from .folang.check import check_translation
from .folang.pool import FormulaPool, random_pool
from .folang.semantics import evaluate_indices
from .hx import collection_subrelation, h_of, pairing_witness, theta
from .kernel import EMPTY, HFSet, big_union, enumerate_v, is_transitive, mk_set, nat, parse_set, rank, surjections, trcl
from .transfer import (
    cofinal_witness,
    family_code,
    identity_map,
    induced_j_table,
    permutation_map,
    transfer_report,
    tree_map,
)
from .trees import (
    Tree,
    canonical_tree,
    join_tree,
    mk_tree,
    relabel,
    singleton_tree,
    tcoll,
    trcl_tree,
    wf_predicate_check,
)
from .universe import CodeUniverse, mk_universe


@dataclass
class SuiteResult:
    number: int
    name: str
    limit: float
    seconds: float = 0.0
    checks: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def in_time(self) -> bool:
        return self.seconds < self.limit

    @property
    def passed(self) -> bool:
        return not self.failures and self.in_time

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = f"[{verdict}] {self.number:2d} {self.name}: {self.checks} checks in {self.seconds:.2f}s (limit {self.limit:g}s)"
        if not self.in_time:
            text += " -- over time"
        if self.failures:
            text += f" -- {len(self.failures)} failures, first: {self.failures[0]}"
        return text

    def to_json(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "limit": self.limit,
            "checks": self.checks,
            "failures": self.failures[:10],
        }


class _Suite:
    """Collects checks; stops recording failure text after a few."""

    def __init__(self, result: SuiteResult):
        self.result = result

    def check(self, ok: bool, what: Callable[[], str]) -> None:
        self.result.checks += 1
        if not ok:
            if len(self.result.failures) < 25:
                self.result.failures.append(what())
            else:
                self.result.failures.append("...")


def _suite(number: int, name: str, limit: float):
    def wrap(body: Callable[[_Suite], None]):
        def run() -> SuiteResult:
            result = SuiteResult(number, name, limit)
            start = time.perf_counter()
            try:
                body(_Suite(result))
            except Exception as exc:  # a crash is a failure, not an abort of selftest
                result.failures.append(f"crashed: {type(exc).__name__}: {exc}")
            result.seconds = time.perf_counter() - start
            return result

        run.number = number
        run.suite_name = name
        run.__doc__ = body.__doc__
        return run

    return wrap


def _p(a: HFSet) -> str:
    return str(a)


# --- 1 ---------------------------------------------------------------------


@_suite(1, "flat pairs", 10)
def flat_pair_suite(s: _Suite) -> None:
    """Injectivity and projections on V_4 x V_4 and random V_5 pairs."""
    V4 = enumerate_v(4)
    rng = random.Random(CORPUS_SEED)
    V5 = enumerate_v(5)
    cases = list(itertools.product(V4, V4))
    cases += [(rng.choice(V5), rng.choice(V5)) for _ in range(10_000)]
    seen: Dict[HFSet, Tuple[HFSet, HFSet]] = {}
    for a, b in cases:
        p = flat_pair(a, b)
        prev = seen.setdefault(p, (a, b))
        s.check(prev == (a, b), lambda: f"pair({_p(a)}, {_p(b)}) collides with pair{tuple(map(_p, prev))}")
        s.check(proj0(p) is a and proj1(p) is b, lambda: f"projections of pair({_p(a)}, {_p(b)})")
        s.check(decode_pair(p) == (a, b), lambda: f"decode of pair({_p(a)}, {_p(b)})")
        r = rank(p)
        # the documented bound: finite, or at most the larger rank
        s.check(isinstance(r, int) or r <= max(rank(a), rank(b)), lambda: f"rank bound at ({_p(a)}, {_p(b)})")


# --- 2 ---------------------------------------------------------------------


@_suite(2, "flat tuples", 10)
def tuple_suite(s: _Suite) -> None:
    """Fixed-arity injectivity, decoding and length over V_3."""
    V3 = enumerate_v(3)
    for n in range(4):
        seen: Dict[HFSet, tuple] = {}
        for xs in itertools.product(V3, repeat=n):
            code = flat_tuple(xs)
            prev = seen.setdefault(code, xs)
            s.check(prev == xs, lambda: f"arity {n}: {xs} collides with {prev}")
            s.check(tuple(decode_tuple(code, n)) == xs, lambda: f"decode of {xs}")
            if n == 0 or xs[-1]:
                s.check(lh(code) == n, lambda: f"lh of {xs} is {lh(code)}")
    s.check(lh(flat_tuple([nat(1), EMPTY])) == 1, lambda: "pinned: lh of <1, 0> should be 1")
    s.check(flat_tuple([nat(1), EMPTY]) is flat_tuple([nat(1)]), lambda: "pinned: <1, 0> = <1>")


# --- 3 ---------------------------------------------------------------------


@_suite(3, "concatenation", 10)
def concat_suite(s: _Suite) -> None:
    """Concatenation law for arities <= 2 and the shift condition."""
    V3 = enumerate_v(3)
    tuples = [xs for n in range(3) for xs in itertools.product(V3, repeat=n)]
    for xs in tuples:
        if not all(xs):
            continue
        for ys in tuples:
            got = concat(flat_tuple(xs), flat_tuple(ys))
            s.check(got is flat_tuple(xs + ys), lambda: f"concat {xs} {ys}")
    for k in range(4):
        for y in V3:
            e = f_tuple(k, y)
            for m in range(4):
                s.check(varsigma(m, e) is f_tuple(k + m, y), lambda: f"shift {m} of f_{k}({_p(y)})")


# --- 4 ---------------------------------------------------------------------


@_suite(4, "bounded library formulas", 30)
def delta0_suite(s: _Suite) -> None:
    """Every builtin is bounded and matches its direct computation on V_3."""
    V3 = enumerate_v(3)
    M = hf_structure(V3)
    for name in BUILTIN_NAMES:
        phi = builtin_formula(name)
        s.check(is_delta0(phi), lambda: f"{name} is not bounded")
        args = builtin_arguments(name)
        rel = direct_relation(name)
        for tup in itertools.product(range(len(V3)), repeat=len(args)):
            got = evaluate_indices(phi, M, dict(zip(args, tup)))
            want = rel(*(V3[i] for i in tup))
            s.check(got == want, lambda: f"{name}{tuple(_p(V3[i]) for i in tup)}: formula {got}, direct {want}")


# --- 5 ---------------------------------------------------------------------


@_suite(5, "collapse and canonical trees", 30)
def collapse_suite(s: _Suite) -> None:
    """Canonical trees collapse back; the closure and singleton trees obey their laws."""
    for a in enumerate_v(4):
        closure = trcl(a)
        for m in range(len(closure) + 2):
            labels = mk_set(nat(i + 1) for i in range(m))
            for f in surjections(labels, closure):
                t = canonical_tree(a, f)
                s.check(tcoll(t) is a, lambda: f"canonical tree of {_p(a)} with {m} labels")
    for t in small_trees():
        a = tcoll(t)
        s.check(tcoll(trcl_tree(t)) is trcl(a), lambda: f"closure tree of {t}")
        s.check(tcoll(singleton_tree(t)) is mk_set([a]), lambda: f"singleton tree of {t}")
        s.check(wf_predicate_check(t), lambda: f"well-foundedness predicate rejects {t}")


# --- 6 ---------------------------------------------------------------------


@_suite(6, "bisimulation against collapse", 60)
def bisim_suite(s: _Suite) -> None:
    """=* and ∈* agree with equality and membership of collapses."""
    corpus = small_trees()
    coll = {t: tcoll(t) for t in corpus}
    for x, y in itertools.product(corpus, corpus):
        s.check(eq_star(x, y) == (coll[x] is coll[y]), lambda: f"=* on {x}, {y}")
        s.check(in_star(x, y) == (coll[x] in coll[y]), lambda: f"in* on {x}, {y}")
    rand = random_trees(2000, 12, CORPUS_SEED + 1)
    for x, y in zip(rand[::2], rand[1::2]):
        a, b = tcoll(x), tcoll(y)
        s.check(eq_star(x, y) == (a is b), lambda: f"=* on {x}, {y}")
        s.check(in_star(x, y) == (a in b), lambda: f"in* on {x}, {y}")


# --- 7 ---------------------------------------------------------------------

H_BASES: Tuple[Tuple[str, ...], ...] = (
    ("1",),
    ("2",),
    ("3",),
    ("{1}",),
    ("1", "2"),
    ("2", "{1}"),
    ("0", "3"),
    ("4",),
)


@_suite(7, "H(X) and theta", 60)
def hx_suite(s: _Suite) -> None:
    """theta by search, pinned H values, closure properties within rank headroom."""
    for S in enumerate_v(4):
        s.check(theta(S) == len(S), lambda: f"theta({_p(S)}) = {theta(S)}")
    pinned = {("1", 3): "{0}", ("2", 3): "{0, 1}", ("3", 4): "{0, 1, 2, {1}}"}
    for (x, r), want in pinned.items():
        got = mk_set(h_of([parse_set(x)], r).members)
        s.check(got is parse_set(want), lambda: f"H({{{x}}}) = {got}, expected {want}")
    r = 4
    for base in H_BASES:
        X = [parse_set(b) for b in base]
        H = h_of(X, r)
        members = H.members
        s.check(is_transitive(mk_set(members)), lambda: f"H({base}) not transitive")
        thetas = {S: theta(S) for S in X}
        for M, S in H.images:
            # rank M <= theta(S); the strict form fails for S = 1, M = {0}
            s.check(rank(M) <= thetas[S], lambda: f"rank {_p(M)} > theta({_p(S)})")
        for a in members:
            for b in _subsets(trcl(a)):
                if rank(b) < r - 1:
                    s.check(b in members, lambda: f"{_p(b)} ⊆ trcl({_p(a)}) missing from H({base})")
            for b in _subsets(a):
                if rank(b) < r - 1:
                    s.check(b in members, lambda: f"subset {_p(b)} of {_p(a)} missing")
            u = big_union(a)
            if rank(u) < r - 1:
                s.check(u in members, lambda: f"union of {_p(a)} missing")
        # pairing, through the explicit witness on the disjoint-union domain
        witness_of = {}
        for M, S in H.images:
            for a in M:
                witness_of.setdefault(a, S)
        for a, b in itertools.combinations_with_replacement(sorted(members), 2):
            got = pairing_witness(a, b, witness_of[a], witness_of[b])
            s.check(got is not None, lambda: f"no pairing witness for {_p(a)}, {_p(b)}")
            if got is not None:
                D, g = got
                onto = mk_set(g.values()) is trcl(mk_set([mk_set([a, b])]))
                s.check(onto and set(g) == set(D), lambda: f"pairing map for {_p(a)}, {_p(b)} not onto")
    R = [(nat(i % 3), nat(i)) for i in range(7)]
    sub = collection_subrelation(R)
    s.check(sub <= set(R) and {x for x, _ in sub} == {x for x, _ in R}, lambda: "collection subrelation contract")


def _subsets(a: HFSet):
    kids = a.children
    for mask in range(1 << len(kids)):
        yield mk_set(k for i, k in enumerate(kids) if mask >> i & 1)


# --- 8 ---------------------------------------------------------------------


@_suite(8, "code translation", 120)
def translation_suite(s: _Suite) -> None:
    """φ on collapses equals its translation on codes, whole pool, 60 universes."""
    universes = sample_universes(60, 8, CORPUS_SEED)
    report = check_translation(universes, itertools.chain(FormulaPool(7, 2).top(), random_pool()))
    s.result.checks += report.assignments
    for m in report.mismatches:
        s.result.failures.append(m.describe())
    if report.formulas < 500_000:
        s.result.failures.append(f"pool too small: {report.formulas}")


# --- 9 ---------------------------------------------------------------------

SWAP = {LABELS[0]: LABELS[1], LABELS[1]: LABELS[0]}


def transfer_universe(max_nodes: int = 4) -> CodeUniverse:
    """Every tree over labels 1, 2 with at most ``max_nodes`` nodes; closed under swapping."""
    return mk_universe(small_trees(max_nodes))


def _code(U: CodeUniverse, text: str) -> Tree:
    a = parse_set(text)
    return next(t for t in U.trees if tcoll(t) is a)


def _codes(U: CodeUniverse, text: str) -> List[Tree]:
    a = parse_set(text)
    return [t for t in U.trees if tcoll(t) is a]


def mutation_set(U: CodeUniverse) -> Dict[str, Tuple[object, CodeUniverse]]:
    """Ten broken maps, each with the universe it acts on.

    All but the last act on ``U`` and break congruence.  The last sends
    {1} to 2 on the codes of 0, 1, {1}, 2: it preserves =* and ∈* forwards
    but not elementarity, since 0 ∉ {1} while 0 ∈ 2.
    """
    zero, one1 = _code(U, "0"), _code(U, "{1}")
    ones = _codes(U, "1")
    twos = _codes(U, "2")
    by_coll = {}
    for t in U.trees:
        by_coll.setdefault(tcoll(t), t)

    def on_collapse(rule: Callable[[HFSet], Optional[HFSet]]):
        mapping = {}
        for t in U.trees:
            target = rule(tcoll(t))
            if target is not None and target in by_coll:
                mapping[t] = by_coll[target]
        return tree_map(U, mapping)

    def natural(a: HFSet) -> Optional[int]:
        text = str(a)
        return int(text) if text.isdigit() else None

    small = mk_universe([_code(U, x) for x in ("0", "1", "{1}", "2")])
    mutants = {
        "everything to a code of 0": tree_map(U, {t: zero for t in U.trees}),
        "one code of 1 to a code of 0": tree_map(U, {ones[0]: zero}),
        "codes of 1 and 2 exchanged": on_collapse(lambda a: {nat(1): nat(2), nat(2): nat(1)}.get(a)),
        "codes of 0 and 1 exchanged": on_collapse(lambda a: {nat(0): nat(1), nat(1): nat(0)}.get(a)),
        "naturals shifted up": on_collapse(lambda a: None if natural(a) is None else nat(natural(a) + 1)),
        "naturals reversed": on_collapse(lambda a: nat(2 - natural(a)) if natural(a) in (0, 1, 2) else None),
        "one code of 2 to a code of {1}": tree_map(U, {twos[0]: one1}),
        "codes of {1} to a code of 1": on_collapse(lambda a: nat(1) if a is parse_set("{1}") else None),
        "each tree to a root branch": tree_map(U, {t: _first_branch(U, t) for t in U.trees}),
    }
    out = {name: (k, U) for name, k in mutants.items()}
    out["{1} to 2 on four codes"] = (tree_map(small, {small.trees[small.position(_code(U, "{1}"))]: _code(U, "2")}), small)
    return out


def _first_branch(U: CodeUniverse, t: Tree) -> Tree:
    from .trees import subtree

    kids = t.children()[()]
    if not kids:
        return t
    sub = subtree(t, (kids[0],))
    return sub if sub in U else t


def elementarity_pool():
    return FormulaPool(5, 2).top()


def cofinal_instances(k_name: str = "identity") -> List[Tuple[Tree, object, object, CodeUniverse]]:
    """(t, c, k, U) for every corpus tree t.

    c carries three slices: k⁻¹(t) at index 1, the one-node tree at index
    2, and a slice at index 3 that is not a tree and must be filtered.
    """
    from .flatcode import flat_pair

    root = mk_tree([], LABELS)
    out = []
    for t in small_trees():
        pre = relabel(t, SWAP) if k_name == "swap" else t
        family = {nat(1): pre, nat(2): root}
        c = family_code(family)
        junk = flat_pair(nat(3), flat_tuple([nat(1)]))  # a node without its root
        c = mk_set(list(c) + [junk])
        witness = join_tree(family)
        pool = {t, pre, root, witness, relabel(witness, SWAP), relabel(root, SWAP)}
        U = mk_universe(sorted(pool, key=repr))
        k = permutation_map(SWAP, U) if k_name == "swap" else identity_map(U)
        out.append((t, c, k, U))
    return out


@_suite(9, "embedding transfer", 60)
def transfer_suite(s: _Suite) -> None:
    """Identity and swap maps transfer cleanly; ten mutants are rejected; cofinality."""
    U = transfer_universe()
    pool = list(elementarity_pool())
    for name, k in (("identity", identity_map(U)), ("swap", permutation_map(SWAP, U))):
        report = transfer_report(k, U, pool)
        s.check(report.ok, lambda: f"{name}: {report.to_text()}")
        table = induced_j_table(k, U)
        s.check(all(a is b for a, b in table.items()), lambda: f"{name}: j is not the identity")
    for name, (k, W) in mutation_set(U).items():
        report = transfer_report(k, W, pool)
        caught = [c for c in report.checks if c.status == "fail" and c.counterexample]
        s.check(bool(caught), lambda: f"mutant not rejected: {name}")
    for k_name in ("identity", "swap"):
        for t, c, k, W in cofinal_instances(k_name):
            try:
                witness = cofinal_witness(t, c, k, W)
            except SetCalcError as exc:
                reason = str(exc)
                s.check(False, lambda: f"{k_name}: cofinal witness for {t}: {reason}")
                continue
            s.check(in_star(t, k(witness)), lambda: f"{k_name}: t not in* k(t') for {t}")


# --- 10 --------------------------------------------------------------------


@_suite(10, "command line goldens", 10)
def cli_suite(s: _Suite) -> None:
    """Every subcommand has a golden case; each reproduces and matches the library."""
    from .cli import SUBCOMMANDS
    from .goldens import library_value, load_goldens, run_case

    cases = load_goldens()
    covered = {case["argv"][0] for case in cases}
    for name in SUBCOMMANDS:
        s.check(name in covered, lambda: f"no golden case for {name}")
    for case in cases:
        argv = " ".join(case["argv"])
        code, out, err, result = run_case(case)
        s.check(code == case["exit"], lambda: f"{argv}: exit {code}, expected {case['exit']}")
        s.check(out == case["stdout"], lambda: f"{argv}: output differs: {out!r}")
        s.check(err == case["stderr"], lambda: f"{argv}: error output differs: {err!r}")
        if "library" in case:
            want = library_value(case["library"])
            s.check(want == case["value"], lambda: f"{argv}: library gives {want!r}, golden {case['value']!r}")
            s.check(result == want, lambda: f"{argv}: CLI gives {result!r}, library {want!r}")


SUITES = (
    flat_pair_suite,
    tuple_suite,
    concat_suite,
    delta0_suite,
    collapse_suite,
    bisim_suite,
    hx_suite,
    translation_suite,
    transfer_suite,
    cli_suite,
)


def run_suites(numbers: Optional[Sequence[int]] = None) -> List[SuiteResult]:
    chosen = [f for f in SUITES if numbers is None or f.number in numbers]
    return [f() for f in chosen]
