import itertools
import random

import pytest
from hypothesis import given

from setcalc.errors import NotANatural, RankBoundExceeded, SetSyntaxError, SizeBoundExceeded
from setcalc.kernel import (
    EMPTY,
    enumerate_v,
    exists_surjection,
    find_surjection,
    is_natural,
    is_transitive,
    mk_set,
    nat,
    parse_set,
    print_set,
    rank,
    set_to_nat,
    surjections,
    trcl,
)
from strategies import V4, hf_sets


def test_mk_set_examples():
    assert mk_set([]) is EMPTY
    assert mk_set([EMPTY, EMPTY]) is nat(1)
    assert mk_set([nat(0), nat(1)]) is nat(2)


def test_rank_examples():
    assert rank(nat(0)) == 0
    assert rank(nat(2)) == 2
    assert rank(parse_set("{{1}}")) == 3


def test_trcl_examples():
    assert trcl(EMPTY) is EMPTY
    assert trcl(parse_set("{{1}}")) is parse_set("{0,1,{1}}")
    assert trcl(nat(3)) is nat(3)


def test_naturals():
    assert is_natural(nat(2))
    assert not is_natural(parse_set("{1}"))
    assert nat(3) is mk_set([nat(0), nat(1), nat(2)])
    assert set_to_nat(nat(5)) == 5
    with pytest.raises(NotANatural):
        set_to_nat(parse_set("{1}"))


def test_enumerate_v_sizes():
    assert enumerate_v(1) == [EMPTY]
    assert [len(enumerate_v(r)) for r in range(5)] == [0, 1, 2, 4, 16]
    assert len(enumerate_v(5)) == 65536
    with pytest.raises(RankBoundExceeded):
        enumerate_v(6)


def test_enumerate_v_is_ranks_below():
    for r in range(5):
        level = enumerate_v(r)
        assert all(rank(a) < r for a in level)
        assert len(set(level)) == len(level)


def test_parse_examples_and_errors():
    assert parse_set("{}") is EMPTY
    assert parse_set("2") is mk_set([EMPTY, nat(1)])
    assert parse_set(" { {} , {{}} } ") is nat(2)
    with pytest.raises(SetSyntaxError) as info:
        parse_set("{1,")
    assert info.value.position == 3
    with pytest.raises(SetSyntaxError):
        parse_set("{1} 2")


def test_print_uses_numerals_and_canonical_order():
    assert print_set(parse_set("{{1},1,0}")) == "{0,1,{1}}"
    assert print_set(nat(3)) == "3"


def test_surjection_examples():
    assert exists_surjection(nat(1), nat(1))
    assert not exists_surjection(nat(1), nat(2))
    assert exists_surjection(nat(2), nat(2))
    assert len(list(surjections(nat(2), nat(2)))) == 2
    assert find_surjection(nat(3), nat(2)) is not None


def test_surjections_match_brute_force():
    for S, M in itertools.product(enumerate_v(4)[:10], repeat=2):
        brute = 0
        for image in itertools.product(list(M), repeat=len(S)):
            brute += set(image) == set(M)
        assert len(list(surjections(S, M))) == brute
        assert exists_surjection(S, M) == (brute > 0)


def test_surjection_guard():
    with pytest.raises(SizeBoundExceeded):
        list(surjections(mk_set(nat(i) for i in range(20)), nat(2)))


@given(hf_sets())
def test_extensionality(a):
    kids = list(a)
    random.Random(len(kids)).shuffle(kids)
    assert mk_set(kids + kids) is a


@given(hf_sets())
def test_parse_print_round_trip(a):
    assert parse_set(print_set(a)) is a


def test_parse_print_round_trip_v4_and_sampled_v5():
    for a in V4:
        assert parse_set(print_set(a)) is a
    rng = random.Random(7)
    for a in rng.sample(enumerate_v(5), 1000):
        assert parse_set(print_set(a)) is a


def test_trcl_rank_and_minimality_on_v4():
    transitive = [t for t in V4 if is_transitive(t)]
    for a in V4:
        closure = trcl(a)
        assert rank(closure) == rank(a)
        assert is_transitive(closure)
        assert a.issubset(closure)
        for t in transitive:
            if a.issubset(t):
                assert closure.issubset(t)


@given(hf_sets())
def test_trcl_rank_sampled(a):
    assert rank(trcl(a)) == rank(a)


@given(hf_sets())
def test_rank_recursion(a):
    assert rank(a) == (0 if not a else 1 + max(rank(b) for b in a))
