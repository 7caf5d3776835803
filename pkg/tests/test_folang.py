import itertools
import random

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from setcalc.corpus import sample_universes, small_trees
from setcalc.errors import (
    ElementNotInDomain,
    FormulaSyntaxError,
    UnboundVariable,
    UnknownFormulaName,
    UntranslatableAtom,
    UntranslatableBoundedQuantifier,
)
from setcalc.folang import (
    BUILTIN_NAMES,
    And,
    BoundedExists,
    BoundedForall,
    Eq,
    Exists,
    Forall,
    Mem,
    Not,
    Suitable,
    builtin_arguments,
    builtin_formula,
    direct_relation,
    evaluate,
    free_vars,
    h_structure,
    hf_structure,
    is_delta0,
    normalize,
    parse_formula,
    print_formula,
    quantifier_depth,
    size,
    translate,
    truth_table,
    unbound,
    v_structure,
)
from setcalc.folang.check import check_translation
from setcalc.folang.packed import PackedTables
from setcalc.folang.pool import FREE, VARIABLES, FormulaPool, random_formula, random_pool
from setcalc.folang.semantics import evaluate_indices
from setcalc.kernel import EMPTY, enumerate_v, mk_set, nat, parse_set, trcl
from setcalc.trees import code_of, tcoll
from setcalc.universe import mk_universe
from strategies import V3

V4 = enumerate_v(4)


# --- parsing -------------------------------------------------------------------


def test_parse_examples():
    assert parse_formula("x in y") == Mem("x", "y")
    phi = parse_formula("forall x in y. x in z")
    assert phi == BoundedForall("x", "y", Mem("x", "z"))
    assert parse_formula("exists y. y in x") == Exists("y", Mem("y", "x"))


def test_precedence():
    phi = parse_formula("not x in y & y in z | x = z -> x in z -> y in y")
    assert print_formula(phi) == "not x in y & y in z | x = z -> x in z -> y in y"
    assert parse_formula("a in a -> b = c -> d in e").right == parse_formula("b = c -> d in e")
    assert parse_formula("(x in y | y in x) & x = y").left == parse_formula("x in y | y in x")


def test_quantifier_body_extends_right():
    phi = parse_formula("exists z. z in x & x in y")
    assert isinstance(phi, Exists) and isinstance(phi.body, And)


def test_syntax_errors_carry_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("x in y &")
    assert info.value.position == 8
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("x in y z")
    assert info.value.position == 7
    with pytest.raises(FormulaSyntaxError):
        parse_formula("exists in. x")


def test_round_trip_on_pool_sample():
    rng = random.Random(5)
    pool = list(itertools.islice(FormulaPool(7, 2).top(), 0, 400_000, 997))
    pool += random_pool()
    pool += [builtin_formula(n) for n in BUILTIN_NAMES]
    for phi in pool + rng.sample(pool, 50):
        assert parse_formula(print_formula(phi)) == phi


@given(st.integers(0, 10**9), st.integers(0, 3), st.integers(1, 12))
def test_round_trip_random(seed, depth, n):
    phi = random_formula(random.Random(seed), depth, n)
    assert parse_formula(print_formula(phi)) == phi
    assert quantifier_depth(phi) == depth


def test_starred_atoms_round_trip():
    phi = translate(parse_formula("forall z. z in x -> z = y"))
    assert "in*" in print_formula(phi)
    assert parse_formula(print_formula(phi)) == phi


def test_normalize_renames_shadowed_variables():
    phi = parse_formula("exists x. x in y & exists x. x in x")
    out = normalize(phi)
    assert free_vars(out) == free_vars(phi)
    inner = out.body.right
    assert inner.var != out.var


# --- bounded formulas ---------------------------------------------------------


def test_is_delta0_examples():
    assert is_delta0(parse_formula("forall x in y. x in z"))
    assert not is_delta0(parse_formula("exists y. y in x"))
    assert all(is_delta0(builtin_formula(n)) for n in BUILTIN_NAMES)


def test_builtin_examples():
    M = hf_structure(V3)
    s = builtin_formula("s_graph")
    assert evaluate(s, M, {"x": nat(0), "y": nat(1)})
    pair = builtin_formula("pair_graph")
    assert evaluate(pair, M, {"a": nat(1), "b": nat(1), "c": nat(2)})
    assert not evaluate(pair, M, {"a": nat(1), "b": nat(1), "c": nat(1)})
    with pytest.raises(UnknownFormulaName):
        builtin_formula("sum_graph")
    with pytest.raises(UnknownFormulaName):
        builtin_arguments("sum_graph")


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_agree_with_direct_computation_on_v3(name):
    M = hf_structure(V3)
    phi = builtin_formula(name)
    args = builtin_arguments(name)
    rel = direct_relation(name)
    for tup in itertools.product(range(len(V3)), repeat=len(args)):
        assert evaluate_indices(phi, M, dict(zip(args, tup))) == rel(*(V3[i] for i in tup))


@pytest.mark.parametrize("name", ["s_graph", "f0_graph", "f1_graph", "lh_graph"])
def test_binary_builtins_agree_on_v4(name):
    M = hf_structure(V4)
    rel = direct_relation(name)
    args = builtin_arguments(name)
    table = truth_table(builtin_formula(name), M, args)
    for i, j in itertools.product(range(len(V4)), repeat=2):
        assert table[i, j] == rel(V4[i], V4[j])


def bounded(rng, depth, n, scope=("x", "y"), d=0):
    """A random bounded formula; bounds range over variables in scope."""
    if depth and rng.random() < 0.5:
        var = f"b{d}"
        body = bounded(rng, depth - 1, max(1, n - 1), scope + (var,), d + 1)
        kind = BoundedExists if rng.random() < 0.5 else BoundedForall
        return kind(var, rng.choice(scope), body)
    if n <= 1:
        a, b = rng.choice(scope), rng.choice(scope)
        return Mem(a, b) if rng.random() < 0.6 else Eq(a, b)
    if rng.random() < 0.25:
        return Not(bounded(rng, depth, n - 1, scope, d))
    k = rng.randint(1, n - 1)
    op = rng.choice((And, lambda p, q: Not(And(p, Not(q)))))
    return op(bounded(rng, depth, k, scope, d), bounded(rng, 0, n - k, scope, d))


@given(st.integers(0, 10**9), st.sampled_from(V3), st.sampled_from(V3))
def test_bounded_formulas_are_absolute(seed, a, b):
    phi = bounded(random.Random(seed), 2, 6)
    assert is_delta0(phi)
    env = {"x": a, "y": b}
    small = sorted(set(trcl(mk_set([a, b]))) | {a, b})
    values = {evaluate(phi, hf_structure(dom), env) for dom in (small, V3, V4)}
    assert len(values) == 1


# --- evaluation -----------------------------------------------------------------


def test_eval_examples():
    M = hf_structure(V3)
    assert evaluate(parse_formula("x = x"), M, {"x": nat(1)})
    assert evaluate(parse_formula("exists y. y in x"), M, {"x": nat(2)})
    assert not evaluate(parse_formula("exists y. y in x"), M, {"x": EMPTY})
    with pytest.raises(UnboundVariable):
        evaluate(parse_formula("x in y"), M, {"x": EMPTY})
    with pytest.raises(ElementNotInDomain):
        evaluate(parse_formula("x = x"), M, {"x": nat(3)})


def test_omega_and_plus():
    M = hf_structure(V4)
    assert evaluate(parse_formula("x in omega"), M, {"x": nat(3)})
    assert not evaluate(parse_formula("x in omega"), M, {"x": parse_set("{1}")})
    assert evaluate(parse_formula("plus(x, x, y)"), M, {"x": nat(1), "y": nat(2)})
    assert not evaluate(parse_formula("plus(x, x, y)"), M, {"x": nat(1), "y": nat(3)})


@given(st.integers(0, 10**9), st.integers(0, 2))
def test_truth_tables_match_tarskian_evaluation(seed, depth):
    phi = random_formula(random.Random(seed), depth, 6)
    M = hf_structure(V3)
    table = truth_table(phi, M, FREE)
    for i, j in itertools.product(range(len(V3)), repeat=2):
        assert table[i, j] == evaluate_indices(phi, M, {"x": i, "y": j})


@given(st.integers(0, 10**9), st.integers(0, 2))
def test_packed_tables_match_single_tables(seed, depth):
    phi = random_formula(random.Random(seed), depth, 7)
    universes = sample_universes(5, 6, seed=seed % 1000)
    structures = [v_structure(U) for U in universes] + [hf_structure(V3)]
    packed = PackedTables(structures).bits(phi, FREE)
    for b, M in enumerate(structures):
        n = len(M)
        assert np.array_equal(packed[b, :n, :n], truth_table(phi, M, FREE))


# --- structures and translation ---------------------------------------------------


def test_structure_examples():
    c0, c1 = code_of(EMPTY), code_of(nat(1))
    U = mk_universe([c0, c1])
    V = v_structure(U)
    assert len(V) == 2 and V.interp_in.tolist() == [[False, True], [False, False]]
    assert h_structure(U).domain == (EMPTY, nat(1))
    twins = [t for t in small_trees(3) if tcoll(t) is nat(1)][:2]
    W = v_structure(mk_universe(twins))
    assert W.interp_eq.all()


def test_translate_examples():
    assert translate(parse_formula("x in y")) == Mem("x", "y", star=True)
    assert translate(parse_formula("not (x = y)")) == Not(Eq("x", "y", star=True))
    assert translate(parse_formula("exists y. y in x")) == Exists("y", And(Suitable("y"), Mem("y", "x", star=True)))
    with pytest.raises(UntranslatableBoundedQuantifier):
        translate(parse_formula("exists y in x. y = y"))
    with pytest.raises(UntranslatableAtom):
        translate(parse_formula("x in omega"))
    with pytest.raises(UntranslatableAtom):
        translate(translate(parse_formula("x in y")))


def test_unbound_then_translate_agrees_with_bounded_on_collapses():
    phi = parse_formula("forall z in x. exists w in y. z in w | z = w")
    universes = sample_universes(20, 6, seed=11)
    assert check_translation(universes, [unbound(phi)]).ok


@given(st.integers(0, 10**9), st.integers(0, 3))
def test_translation_equivalence_by_direct_evaluation(seed, depth):
    """The packed checker and plain evaluation agree, and both find no mismatch."""
    phi = random_formula(random.Random(seed), depth, 7)
    U = sample_universes(1, 6, seed=seed % 997)[0]
    H, V = h_structure(U), v_structure(U)
    t = translate(phi)
    for s, r in itertools.product(U.trees, repeat=2):
        direct = evaluate(phi, H, {"x": tcoll(s), "y": tcoll(r)})
        assert evaluate(t, V, {"x": s, "y": r}) == direct
    assert check_translation([U], [phi]).ok


def test_literal_existential_fails_with_a_non_suitable_element():
    universes = sample_universes(4, 4, seed=2)
    phi = parse_formula("exists z. z in x & not z = z")
    assert check_translation(universes, [phi]).ok
    assert check_translation(universes, [phi], literal=True).ok  # every element suitable
    report = check_translation(universes, [phi], literal=True, junk=1)
    assert not report.ok
    m = report.mismatches[0]
    assert m.direct is False and m.translated is True


def test_pool_shape():
    seen = set()
    count = 0
    for phi in FormulaPool(7, 2).top():
        count += 1
        seen.add(phi)
        assert size(phi) <= 7
        assert quantifier_depth(phi) <= 2
        assert free_vars(phi) <= set(FREE)
    assert count == len(seen) == 501_417


def test_pool_variables_follow_depth():
    for phi in itertools.islice(FormulaPool(5, 2).top(), 0, None, 37):
        for node in _quantifiers(phi, 0):
            q, d = node
            assert q.var == VARIABLES[2 + d]


def _quantifiers(phi, d):
    if isinstance(phi, (Exists, Forall)):
        yield phi, d
        yield from _quantifiers(phi.body, d + 1)
    elif isinstance(phi, Not):
        yield from _quantifiers(phi.body, d)
    elif hasattr(phi, "left") and not isinstance(phi, (Mem, Eq)):
        yield from _quantifiers(phi.left, d)
        yield from _quantifiers(phi.right, d)


def test_random_pool_is_reproducible_and_deep():
    a, b = random_pool(), random_pool()
    assert a == b and len(a) == 200
    assert all(3 <= quantifier_depth(p) <= 4 for p in a)
    assert all(free_vars(p) <= set(FREE) for p in a)
