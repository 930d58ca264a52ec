"""Surface syntax: print/parse round-trips and parse errors."""
import pytest
from hypothesis import given, settings, strategies as st

from propsig.ast import Hole
from propsig.parser import ParseError, parse_expr
from propsig.printer import print_expr
from propsig.typecheck import infer_type
from propsig.types import INT, FunT, parse_type

ROUND_TRIP = [
    "0",
    "-7",
    "true",
    "nil<Int>",
    "(1, 2)",
    "\\(a2:Int) { mul(a2, a2) }",
    "\\(a2:(Int, Int)) { (snd(a2), fst(a2)) }",
    "\\(a2:List<Int>) { concat<Int>(reverse<Int>(a2), a2) }",
    "\\(a2:List<Int>) { map<Int, Int>(a2, \\(a3:Int) { add(a3, a3) }) }",
    "\\(a2:(List<Int>, List<Int>)) { for_all<Int>(fst(a2), \\(a3:Int) { contains<Int>(snd(a2), a3) }) }",
]


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_round_trip(text):
    e = parse_expr(text)
    assert print_expr(e) == text
    assert parse_expr(print_expr(e)) == e


def test_holes_round_trip_with_expected_type():
    t = parse_type("(Int) -> Int")
    e = parse_expr("\\(a: Int) { add(?, ?) }", t)
    text = print_expr(e)
    assert text == "\\(a2:Int) { add(?, ?) }"
    again = parse_expr(text, t)
    assert again == e
    h = again.body.args[0]
    assert isinstance(h, Hole) and h.hole_type == INT


def test_binders_print_by_depth():
    e = parse_expr("\\(x: Int) { \\(y: Int) { add(x, y) } }")
    assert print_expr(e) == "\\(a2:Int) { \\(a3:Int) { add(a2, a3) } }"


@pytest.mark.parametrize("bad", [
    "",
    "add(1",
    "\\(a) { a }",            # binder needs a type
    "frobnicate(1)",          # unknown component
    "\\(a: Int) { b }",       # unbound identifier
    "zero()",                 # literal components have no call syntax
    "(1, 2, 3)",              # pairs are binary
])
def test_parse_errors(bad):
    with pytest.raises((ParseError, ValueError)):
        parse_expr(bad)


def test_component_type_arguments_checked_at_typecheck():
    from propsig.typecheck import TypeCheckError

    # parsing is syntax-only; the mismatch surfaces in infer_type
    e = parse_expr("\\(a: List<Int>) { reverse<Bool>(a) }")
    with pytest.raises(TypeCheckError):
        infer_type(e)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=-(2**63), max_value=2**63 - 1))
def test_integer_literals_round_trip(n):
    e = parse_expr(str(n))
    assert print_expr(e) == str(n)


def test_expected_type_is_a_hole_hint_only():
    # explicit binder annotations dominate; `expected` exists to type holes
    e = parse_expr("\\(a: Int) { a }", parse_type("(Bool) -> Bool"))
    assert infer_type(e) == FunT(INT, INT)
    filled = parse_expr("\\(a: Int) { add(?, a) }", parse_type("(Int) -> Int"))
    assert filled.body.args[0].hole_type == INT


def test_parsed_programs_typecheck():
    for text in ROUND_TRIP:
        e = parse_expr(text)
        infer_type(e)  # must not raise
