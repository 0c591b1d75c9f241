import random

import pytest
from hypothesis import given, settings, strategies as st

from selcat import scenarios
from selcat.chains import (build_chain, compute_from_escapee, deficiency_subset, escapees,
                           locate_cone, reduce_to_source)
from selcat.errors import InvalidInput
from selcat.numbering import Enumeration, Horizon

H = Horizon(64, 64)


def deficiency_oracle(a, v):
    return {vs for s, vs in enumerate(v) if any(a[t] < vs for t in range(s + 1, len(a)))}


def test_worked_example():
    a, v = Enumeration((3, 1, 4)), Enumeration((2, 5))
    av = deficiency_subset(a, v)
    assert av.members() == {2, 5}
    assert av.entry_stage(2) == 1 and av.entry_stage(5) == 2


def test_increasing_source_can_leave_nothing():
    assert deficiency_subset(Enumeration((5, 6, 7)), Enumeration((1, 2))).members() == set()


def test_empty_v():
    assert deficiency_subset(Enumeration((3, 1, 4)), Enumeration(())).members() == set()


def test_horizon_cuts_the_source():
    a, v = Enumeration((3, 1, 4)), Enumeration((2, 5))
    assert deficiency_subset(a, v, Horizon(2, 8)).members() == {2}


def test_needs_injective_listings():
    with pytest.raises(InvalidInput):
        deficiency_subset(Enumeration((1, 1), injective=False), Enumeration((2,)))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60)
def test_deficiency_matches_direct_scan(seed):
    a, v = scenarios.random_chain_sources(seed, 2, Horizon(40, 40))
    assert deficiency_subset(a, v).members() == deficiency_oracle(a.listing, v.listing)


def test_reduce_examples():
    a, v = Enumeration((3, 1, 4)), Enumeration((2, 5))
    A = {1, 3, 4}.__contains__
    assert reduce_to_source(2, a, v, A)
    assert not reduce_to_source(3, a, v, A)
    # 6 = v(0), but nothing listed after it drops below 6
    assert not reduce_to_source(6, Enumeration((8, 9, 7)), Enumeration((6,)), {7, 8, 9}.__contains__)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60)
def test_reduce_agrees_with_membership(seed):
    a, v = scenarios.random_chain_sources(seed, 2, H)
    av = deficiency_oracle(a.listing, v.listing)
    A = a.members()
    for x in range(64):
        assert reduce_to_source(x, a, v, A.__contains__) == (x in av)


def test_escapee_sees_initial_segment():
    a = Enumeration((0, 2, 5, 1))
    member = compute_from_escapee(9, 3, a)
    assert [x for x in range(9) if member(x)] == [0, 1, 2, 5]
    with pytest.raises(InvalidInput):
        compute_from_escapee(0, 3, a)(0)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60)
def test_escapees_compute_source(seed):
    rng = random.Random(seed)
    a, v = scenarios.random_chain_sources(rng, 2, H)
    av = deficiency_oracle(a.listing, v.listing)
    X = scenarios.random_between(rng, av, v.members())
    A = a.members()
    for w, s in escapees(a, v, X):
        assert w not in X and w not in av and v.value(s) == w
        member = compute_from_escapee(w, s, a)
        assert {x for x in range(w) if member(x)} == {x for x in A if x < w}


def test_chain_examples():
    A1 = Enumeration((4, 0, 2))
    c = build_chain([A1])
    assert c.U == c.V == A1 and len(c) == 1
    c = build_chain([Enumeration((2, 5)), Enumeration((3, 1, 4))])
    assert c.sets[1].members() == {2, 5}
    with pytest.raises(InvalidInput):
        build_chain([])


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
@settings(max_examples=60)
def test_chains_nest_stagewise(seed, k):
    chain = build_chain(scenarios.random_chain_sources(seed, k, H))
    assert chain.nesting_violations() == []
    for big, small in zip(chain.sets, chain.sets[1:]):
        for s in range(H.stages + 1):
            assert small.members(s) <= big.members(s)


def test_locate_cone():
    chain = build_chain([Enumeration((2, 5, 7)), Enumeration((3, 1, 4))])
    assert chain.U.members() == {2, 5}
    assert locate_cone(chain, {2, 5, 7, 9}) == 1
    assert locate_cone(chain, {2, 5}) == 2
    assert locate_cone(chain, {2}, exceptions={5}) == 2
    with pytest.raises(InvalidInput):
        locate_cone(chain, {2})
