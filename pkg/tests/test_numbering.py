import pytest
from hypothesis import given, strategies as st

from selcat.errors import HorizonExceeded, InvalidInput
from selcat.numbering import (Enumeration, Horizon, canonical_index, canonical_set, join,
                              member_at, pair, split, unpair)


def diagonal_pairs(limit):
    """Walk the anti-diagonals x+y = d in the order of increasing y."""
    code = 0
    d = 0
    while code < limit:
        for y in range(d + 1):
            yield code, (d - y, y)
            code += 1
        d += 1


@pytest.mark.parametrize("n, expected", [(0, set()), (5, {0, 2}), (6, {1, 2})])
def test_canonical_set_examples(n, expected):
    assert canonical_set(n) == expected


@pytest.mark.parametrize("members, expected", [((), 0), ((0, 2), 5), ((3,), 8)])
def test_canonical_index_examples(members, expected):
    assert canonical_index(members) == expected


def test_canonical_set_matches_bits():
    for n in range(2048):
        assert canonical_set(n) == {x for x in range(11) if n // 2 ** x % 2}


@given(st.frozensets(st.integers(0, 40)))
def test_index_then_set(s):
    assert canonical_set(canonical_index(s)) == s


def test_canonical_rejects_negatives():
    with pytest.raises(InvalidInput):
        canonical_set(-1)
    with pytest.raises(InvalidInput):
        canonical_index([2, -3])


@pytest.mark.parametrize("xy, z", [((0, 0), 0), ((1, 0), 1), ((0, 1), 2)])
def test_pair_examples(xy, z):
    assert pair(*xy) == z


def test_pair_walks_diagonals():
    for code, xy in diagonal_pairs(3000):
        assert pair(*xy) == code
        assert unpair(code) == xy


@given(st.integers(0, 10 ** 12), st.integers(0, 10 ** 12))
def test_pair_roundtrip_large(x, y):
    assert unpair(pair(x, y)) == (x, y)


@pytest.mark.parametrize("a, b, expected", [
    (set(), set(), set()),
    ({0}, {0}, {0, 1}),
    ({1}, {0, 2}, {1, 2, 5}),
])
def test_join_examples(a, b, expected):
    assert join(a, b) == expected


@given(st.frozensets(st.integers(0, 100)), st.frozensets(st.integers(0, 100)))
def test_split_inverts_join(a, b):
    assert split(join(a, b)) == (a, b)


def test_member_at_examples():
    E = Enumeration((3, 1, 4))
    assert not E.member_at(1, 1)
    assert E.member_at(1, 2)
    assert not any(E.member_at(x, 0) for x in range(10))


def test_member_at_respects_horizon():
    E = Enumeration((3, 1, 4))
    assert member_at(E, 4, 3, Horizon(3, 5))
    with pytest.raises(HorizonExceeded):
        member_at(E, 4, 4, Horizon(3, 5))


def test_value_past_listing():
    with pytest.raises(HorizonExceeded):
        Enumeration((3, 1)).value(2)


def test_explicit_stages_and_first_entry():
    E = Enumeration((5, 2, 5), (0, 3, 3), injective=False)
    assert E.entry_stage(5) == 0
    assert E.entry_stage(2) == 3
    assert E.members(3) == {5}
    assert E.members() == {2, 5}


@pytest.mark.parametrize("listing, stages", [
    ((1, 2), (2, 1)),
    ((1, 1), None),
    ((-1,), None),
    ((1, 2), (0,)),
])
def test_bad_enumerations(listing, stages):
    with pytest.raises(InvalidInput):
        Enumeration(listing, stages)


@given(st.dictionaries(st.integers(0, 50), st.integers(0, 30)), st.integers(0, 31))
def test_from_entries_is_monotone(entries, stage):
    E = Enumeration.from_entries(entries)
    assert E.members(stage) == {x for x, s in entries.items() if s < stage}
    assert E.members(stage) <= E.members(stage + 1)


def test_validate_against_horizon():
    with pytest.raises(InvalidInput):
        Enumeration((9,)).validate(Horizon(4, 8))
    Enumeration((7,)).validate(Horizon(4, 8))


def test_horizon_bounds():
    with pytest.raises(InvalidInput):
        Horizon(1, 4)
    with pytest.raises(InvalidInput):
        Horizon(4, 0)
