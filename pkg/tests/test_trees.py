import json

import pytest
from hypothesis import given
import hypothesis.strategies as st

from setcalc.corpus import LABELS, small_trees
from setcalc.errors import (
    AmbiguousFlatEncoding,
    LabelOutsideUniverse,
    NodeNotInTree,
    NotOntoTransitiveClosure,
    SizeBoundExceeded,
)
from setcalc.kernel import enumerate_v, mk_set, nat, parse_set, trcl
from setcalc.trees import (
    canonical_tree,
    code_of,
    decode_tree,
    encode_tree,
    is_suitable,
    join_tree,
    mk_tree,
    parse_tree,
    print_tree,
    singleton_tree,
    subtree,
    successors,
    tcoll,
    trcl_tree,
    tree_from_json,
    tree_to_json,
    wf_predicate_check,
)
from strategies import corpus_trees, trees

Z, ONE, TWO = nat(0), nat(1), nat(2)
U, V = nat(1), nat(2)


def test_mk_tree_examples():
    assert mk_tree([], [Z]).nodes == {()}
    assert mk_tree([(Z, Z)], [Z]).nodes == {(), (Z,), (Z, Z)}
    assert len(mk_tree([(ONE,), (Z,)], [Z, ONE])) == 3
    with pytest.raises(LabelOutsideUniverse):
        mk_tree([(TWO,)], [Z])


def test_suitability_and_wf_predicate():
    assert is_suitable(mk_tree([]))
    assert wf_predicate_check(mk_tree([(Z,)]))
    for t in small_trees(4):
        assert wf_predicate_check(t)
    big = mk_tree([(U,) * 16])
    with pytest.raises(SizeBoundExceeded):
        wf_predicate_check(big)


def test_subtree_and_successors_examples():
    t = mk_tree([(Z, ONE)])
    assert subtree(t, ()) == t
    assert subtree(t, (Z,)).nodes == {(), (ONE,)}
    assert subtree(mk_tree([(Z,)]), (Z,)).nodes == {()}
    assert successors(mk_tree([]), ()) == frozenset()
    assert successors(mk_tree([(Z,), (ONE,)]), ()) == {Z, ONE}
    assert successors(t, (Z,)) == {ONE}
    with pytest.raises(NodeNotInTree):
        subtree(t, (ONE,))


def test_tcoll_examples():
    assert tcoll(mk_tree([])) is Z
    assert tcoll(mk_tree([(U,)])) is ONE
    assert tcoll(mk_tree([(U,), (V, U)])) is TWO


def test_canonical_tree_examples():
    assert canonical_tree(Z, {}).nodes == {()}
    t = canonical_tree(TWO, {Z: Z, ONE: ONE})
    assert t.nodes == {(), (Z,), (ONE,), (ONE, Z)}
    redundant = canonical_tree(ONE, {U: Z, V: Z})
    assert redundant.nodes == {(), (U,), (V,)} and tcoll(redundant) is ONE
    with pytest.raises(NotOntoTransitiveClosure):
        canonical_tree(TWO, {U: Z})


def test_trcl_tree_examples():
    assert trcl_tree(mk_tree([])).nodes == {()}
    a = parse_set("{{1}}")
    assert tcoll(trcl_tree(code_of(a))) is parse_set("{0,1,{1}}")
    assert tcoll(trcl_tree(canonical_tree(TWO, {Z: Z, ONE: ONE}))) is TWO


def test_singleton_tree_examples():
    s = singleton_tree(mk_tree([]))
    assert s.nodes == {(), (Z,)} and tcoll(s) is ONE
    assert tcoll(singleton_tree(code_of(ONE))) is parse_set("{1}")
    assert tcoll(singleton_tree(singleton_tree(mk_tree([])))) is parse_set("{1}")


def test_join_tree_examples():
    root = mk_tree([])
    assert join_tree({}).nodes == {()}
    assert tcoll(join_tree({U: root})) is ONE
    assert tcoll(join_tree({U: root, V: singleton_tree(root)})) is TWO


def test_encode_decode_examples():
    assert encode_tree(mk_tree([])) is nat(1)
    for t in small_trees(5):
        assert decode_tree(encode_tree(t), LABELS) == t
    with pytest.raises(AmbiguousFlatEncoding):
        encode_tree(mk_tree([(Z,)]))


def test_canonical_trees_collapse_back_on_v4():
    from setcalc.kernel import surjections

    for a in enumerate_v(4):
        closure = trcl(a)
        for m in range(len(closure) + 2):
            labels = mk_set(nat(i + 1) for i in range(m))
            for f in surjections(labels, closure):
                assert tcoll(canonical_tree(a, f)) is a


def test_closure_and_singleton_laws_on_corpus():
    for t in small_trees():
        assert tcoll(trcl_tree(t)) is trcl(tcoll(t))
        assert tcoll(singleton_tree(t)) is mk_set([tcoll(t)])


@given(st.dictionaries(st.sampled_from([nat(i) for i in range(1, 6)]), trees(6), max_size=3))
def test_join_law(branches):
    assert tcoll(join_tree(branches)) is mk_set(tcoll(t) for t in branches.values())


def test_successors_agree_with_subtrees():
    for t in small_trees():
        for sigma in t.nodes:
            below = subtree(t, sigma)
            assert successors(t, sigma) == {n[0] for n in below.nodes if len(n) == 1}


@given(trees(12))
def test_text_and_json_round_trip(t):
    assert parse_tree(print_tree(t)) == t
    assert tree_from_json(json.loads(json.dumps(tree_to_json(t)))) == t
    assert parse_tree(json.dumps(tree_to_json(t))) == t


def test_text_format_with_unused_labels():
    t = mk_tree([(U,)], LABELS)
    assert print_tree(t) == "# labels: 1 2\n\n1\n"
    assert parse_tree(print_tree(t)) == t
    assert parse_tree("1;1/2").nodes == {(), (U,), (U, V)}


@given(corpus_trees)
def test_code_of_collapse_round_trip(t):
    a = tcoll(t)
    assert tcoll(code_of(a)) is a
