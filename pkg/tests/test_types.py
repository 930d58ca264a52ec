"""Type syntax: construction, parsing, printing, matching."""
import pytest
from hypothesis import given, strategies as st

from propsig.types import (
    BOOL,
    INT,
    FunT,
    ListT,
    PairT,
    TypeParseError,
    TypeVar,
    is_ground,
    match_type,
    parse_type,
    subst_type,
    subterm_types,
    type_to_str,
)

CASES = [
    ("Int", INT),
    ("Bool", BOOL),
    ("List<Int>", ListT(INT)),
    ("(Int, Bool)", PairT(INT, BOOL)),
    ("(Int) -> Int", FunT(INT, INT)),
    ("(List<Int>) -> List<Int>", FunT(ListT(INT), ListT(INT))),
    ("((Int, Int)) -> (Int, Int)", FunT(PairT(INT, INT), PairT(INT, INT))),
    ("List<List<Bool>>", ListT(ListT(BOOL))),
]


@pytest.mark.parametrize("text,ty", CASES)
def test_parse(text, ty):
    assert parse_type(text) == ty


@pytest.mark.parametrize("text,ty", CASES)
def test_print_parse_round_trip(text, ty):
    assert parse_type(type_to_str(ty)) == ty


@pytest.mark.parametrize("bad", ["", "In t", "List<>", "(Int", "Int ->", "List<Int"])
def test_parse_errors(bad):
    with pytest.raises((TypeParseError, ValueError)):
        parse_type(bad)


def _types(max_depth=3):
    base = st.sampled_from([INT, BOOL])
    return st.recursive(
        base,
        lambda t: st.one_of(
            t.map(ListT),
            st.tuples(t, t).map(lambda p: PairT(*p)),
            st.tuples(t, t).map(lambda p: FunT(*p)),
        ),
        max_leaves=6,
    )


@given(_types())
def test_round_trip_random(ty):
    assert parse_type(type_to_str(ty)) == ty


def test_subterms():
    t = PairT(ListT(INT), FunT(INT, BOOL))
    subs = set(subterm_types(t))
    assert {t, ListT(INT), INT, FunT(INT, BOOL), BOOL} == subs


def test_match_binds_vars():
    a, b = TypeVar("a"), TypeVar("b")
    bindings: dict = {}
    assert match_type(PairT(a, b), PairT(INT, ListT(BOOL)), bindings)
    assert bindings == {"a": INT, "b": ListT(BOOL)}
    assert subst_type(ListT(a), bindings) == ListT(INT)


def test_match_conflict_fails():
    a = TypeVar("a")
    assert not match_type(PairT(a, a), PairT(INT, BOOL), {})


def test_is_ground():
    assert is_ground(ListT(INT))
    assert not is_ground(ListT(TypeVar("a")))
