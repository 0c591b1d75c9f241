import pytest
from hypothesis import given, strategies as st

from selcat.formulas import (TRUE, And, Apply, Eq, Exists, ParseError, Var, conj, depth,
                             enumerate_formulas, free_vars, instantiate, parse, size, substitute,
                             symbols, to_text)

FORMULAS = enumerate_formulas((0, 3), 6)


def test_text_form():
    phi = Exists("z", Var("x"), Eq(Apply(3, Var("z")), Var("x")))
    assert to_text(phi) == "(exists z x (= (e 3 z) x))"
    assert to_text(TRUE) == "(and)"
    assert to_text(Exists("y", None, TRUE)) == "(exists y _ (and))"


@given(st.sampled_from(FORMULAS))
def test_parse_inverts_text(phi):
    assert parse(to_text(phi)) == phi


@pytest.mark.parametrize("text, offset", [
    ("(= x", 4),
    ("(or x y)", 1),
    ("(= (e k x) x)", 6),
    ("(and) x", 6),
    ("(exists and x (and))", 8),
])
def test_parse_errors_report_offset(text, offset):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.position == offset


def test_conj_flattens():
    a, b, c = (Eq(Var(v), Var(v)) for v in "abc")
    assert conj(a) == a
    assert conj(And((a, b)), c) == And((a, b, c))
    assert conj() == TRUE


def test_measures():
    phi = parse("(and (exists z x (= (e 1 z) x)) (!= (e 2 x) x))")
    assert size(phi) == 11
    assert depth(phi) == 1
    assert symbols(phi) == {1, 2}
    assert free_vars(phi) == {"x"}


def test_substitution_avoids_capture():
    phi = parse("(exists z x (= (e 1 z) x))")
    out = substitute(phi, "x", Apply(2, Var("z")))
    assert isinstance(out, Exists) and out.var != "z"
    assert free_vars(out) == {"z"}
    assert to_text(out).count("(e 2 z)") == 2


def test_instantiate_moves_argument():
    phi = parse("(exists z x (= (e 1 z) x))")
    assert instantiate(phi, Apply(5, Var("x"))) == parse("(exists z (e 5 x) (= (e 1 z) (e 5 x)))")


def test_enumeration_is_ordered_and_unique():
    texts = [to_text(p) for p in FORMULAS]
    assert len(set(texts)) == len(texts)
    sizes = [size(p) for p in FORMULAS]
    assert sizes == sorted(sizes)
    assert FORMULAS[0] == TRUE
    assert all(free_vars(p) <= {"x"} for p in FORMULAS)


def test_enumeration_is_complete_for_small_sizes():
    got = {to_text(p) for p in enumerate_formulas((1,), 4)}
    assert "(= (e 1 x) x)" in got
    assert "(exists z0 _ (= z0 x))" in got
    assert "(exists z0 x (and))" in got
    assert len([p for p in enumerate_formulas((1,), 4) if size(p) == 4]) == len(
        [t for t in got if size(parse(t)) == 4])


def test_enumeration_is_stable():
    assert enumerate_formulas((3, 0), 5) == enumerate_formulas([0, 3, 3], 5)
    assert [to_text(p) for p in FORMULAS[:3]] == ["(and)", "(exists z0 _ (and))", "(!= x x)"]
