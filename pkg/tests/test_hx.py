import itertools

import pytest
from hypothesis import given
import hypothesis.strategies as st

from setcalc.errors import RankBoundExceeded, SizeBoundExceeded
from setcalc.flatcode import disjoint_union
from setcalc.hx import collection_subrelation, h_of, is_in_h, pairing_witness, theta, transitive_sets
from setcalc.kernel import (
    EMPTY,
    big_union,
    enumerate_v,
    exists_surjection,
    is_transitive,
    mk_set,
    nat,
    parse_set,
    rank,
    singleton,
    trcl,
)
from strategies import V4

P = parse_set


def subsets(a):
    kids = list(a)
    for mask in range(1 << len(kids)):
        yield mk_set(k for i, k in enumerate(kids) if mask >> i & 1)


def test_theta_examples():
    assert theta(EMPTY) == 0
    assert theta(nat(2)) == 2
    assert theta(P("{2}")) == 1
    with pytest.raises(SizeBoundExceeded):
        theta(mk_set(nat(i) for i in range(9)))


def test_theta_is_cardinality_on_v4():
    for S in V4:
        assert theta(S) == len(S)


def test_h_of_examples():
    assert h_of([nat(1)], 3).members == {EMPTY}
    assert h_of([nat(2)], 3).members == {EMPTY, nat(1)}
    assert h_of([nat(3)], 4).members == {EMPTY, nat(1), nat(2), P("{1}")}
    with pytest.raises(RankBoundExceeded):
        h_of([nat(1)], 5)


def test_is_in_h_examples():
    assert is_in_h(EMPTY, [nat(1)])
    assert not is_in_h(nat(1), [nat(1)])
    assert is_in_h(P("{1}"), [nat(3)])


def test_transitive_sets_are_exactly_the_transitive_members_of_the_powerset():
    for r in range(1, 4):
        found = set(transitive_sets(r))
        level = enumerate_v(r + 1)
        assert found == {t for t in level if is_transitive(t) and all(rank(x) < r for x in t)}


BASES = [[nat(1)], [nat(2)], [nat(3)], [P("{1}")], [nat(1), nat(2)], [nat(0), nat(3)], [nat(4)], [P("{0,{1}}")]]


@pytest.mark.parametrize("base", BASES, ids=lambda b: ",".join(map(str, b)))
def test_closure_properties(base):
    r = 4
    H = h_of(base, r)
    members = H.members
    assert is_transitive(mk_set(members))
    for a in members:
        for b in subsets(trcl(a)):
            if rank(b) < r - 1:
                assert b in members
        for b in subsets(a):
            if rank(b) < r - 1:
                assert b in members
        if rank(big_union(a)) < r - 1:
            assert big_union(a) in members


@pytest.mark.parametrize("base", BASES, ids=lambda b: ",".join(map(str, b)))
def test_members_are_images_by_brute_force(base):
    r = 4
    expected = set()
    for M in transitive_sets(r):
        if any(exists_surjection(S, M) for S in base):
            expected |= set(M)
    assert h_of(base, r).members == expected


def test_image_rank_bound_and_the_strict_form_counterexample():
    for base in BASES:
        for M, S in h_of(base, 4).images:
            assert rank(M) <= theta(S)
    # the strict inequality fails already for the singleton
    M, S = mk_set([EMPTY]), nat(1)
    assert M in {m for m, _ in h_of([S], 3).images}
    assert rank(M) == theta(S) == 1


def test_pairing_witness_is_onto_the_closure_of_the_pair():
    X = [nat(1), nat(2), nat(3)]
    H = h_of(X, 4)
    witness = {}
    for M, S in H.images:
        for a in M:
            witness.setdefault(a, S)
    for a, b in itertools.combinations_with_replacement(sorted(H.members), 2):
        D, g = pairing_witness(a, b, witness[a], witness[b])
        assert set(g) == set(D)
        assert mk_set(g.values()) is trcl(singleton(mk_set([a, b])))
        assert D is disjoint_union(disjoint_union(witness[a], witness[b]), nat(1))


def test_pairing_inside_h_when_the_domain_is_added():
    X = [nat(1), nat(2)]
    H = h_of(X, 4)
    for a, b in itertools.product(H.members, repeat=2):
        pair = mk_set([a, b])
        if rank(pair) + 1 < 4:
            Sa = next(S for M, S in H.images if a in M)
            Sb = next(S for M, S in H.images if b in M)
            D, _ = pairing_witness(a, b, Sa, Sb)
            assert pair in h_of(X + [D], 4).members


def test_pairing_witness_missing_surjection():
    assert pairing_witness(nat(2), EMPTY, nat(1), nat(1)) is None


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 9)), max_size=20))
def test_collection_subrelation_contract(pairs):
    R = [(nat(x), nat(y)) for x, y in pairs]
    S = collection_subrelation(R)
    assert S <= set(R)
    assert {x for x, _ in S} == {x for x, _ in R}
    assert len({y for _, y in S}) <= len(S)
