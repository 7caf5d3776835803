import itertools

from hypothesis import given

from setcalc.bisim import check_mvi, eq_star, greatest_mvi, in_star, mvi
from setcalc.corpus import random_trees, small_trees
from setcalc.kernel import nat
from setcalc.trees import canonical_tree, collapse_map, code_of, join_tree, mk_tree, tcoll
from strategies import corpus_trees, trees

U, V, W = nat(1), nat(2), nat(3)
ROOT_ONLY = mk_tree([])


def test_mvi_examples():
    assert mvi(ROOT_ONLY, ROOT_ONLY) == {((), ())}
    rel = mvi(mk_tree([(U,)]), mk_tree([(V,), (W,)]))
    assert rel == {((), ()), ((U,), (V,)), ((U,), (W,))}
    assert mvi(ROOT_ONLY, mk_tree([(U,)])) is None


def test_eq_star_examples():
    t = mk_tree([(U, V), (V,)])
    assert eq_star(t, t)
    two_by_join = join_tree({U: ROOT_ONLY, V: mk_tree([(U,)])})
    assert eq_star(canonical_tree(nat(2), {nat(0): nat(0), nat(1): nat(1)}), two_by_join)
    assert not eq_star(code_of(nat(1)), code_of(nat(2)))


def test_in_star_examples():
    assert in_star(ROOT_ONLY, mk_tree([(U,)]))
    assert in_star(code_of(nat(1)), code_of(nat(2)))
    for t in small_trees(4):
        assert not in_star(t, ROOT_ONLY)


def test_oracle_equivalence_on_corpus():
    corpus = small_trees()
    coll = [tcoll(t) for t in corpus]
    for i, j in itertools.product(range(len(corpus)), repeat=2):
        assert eq_star(corpus[i], corpus[j]) == (coll[i] is coll[j])
        assert in_star(corpus[i], corpus[j]) == (coll[i] in coll[j])


def test_oracle_equivalence_on_random_pairs():
    rand = random_trees(2000, 12, seed=99)
    for s, t in zip(rand[::2], rand[1::2]):
        assert eq_star(s, t) == (tcoll(s) is tcoll(t))
        assert in_star(s, t) == (tcoll(s) in tcoll(t))


@given(trees(12), trees(12))
def test_returned_relation_passes_clause_checker(s, t):
    rel = mvi(s, t)
    if rel is None:
        assert tcoll(s) is not tcoll(t)
    else:
        assert check_mvi(s, t, rel) == []


@given(trees(9), trees(9))
def test_greatest_relation_satisfies_biconditional(s, t):
    # both readings of the back-and-forth clause give the same verdict
    rel = greatest_mvi(s, t)
    cs, ct = collapse_map(s), collapse_map(t)
    assert rel == {(a, b) for a in s.nodes for b in t.nodes if cs[a] is ct[b]}
    assert (((), ()) in rel) == eq_star(s, t)
    if eq_star(s, t):
        assert check_mvi(s, t, rel, biconditional=True) == []


def test_clause_checker_rejects_broken_relations():
    s, t = mk_tree([(U,)]), mk_tree([(V,), (W,)])
    assert check_mvi(s, t, frozenset({((U,), (V,))}))
    assert check_mvi(s, t, frozenset({((), ())}))


@given(corpus_trees, corpus_trees, corpus_trees)
def test_eq_star_is_an_equivalence(a, b, c):
    assert eq_star(a, a)
    assert eq_star(a, b) == eq_star(b, a)
    if eq_star(a, b) and eq_star(b, c):
        assert eq_star(a, c)


@given(corpus_trees, corpus_trees, corpus_trees)
def test_in_star_respects_eq_star(a, b, c):
    if eq_star(a, b):
        assert in_star(a, c) == in_star(b, c)
        assert in_star(c, a) == in_star(c, b)
