"""Expression tree invariants: holes, de Bruijn indices, composition."""
import pytest

from propsig.ast import (
    Apply,
    Hole,
    IntLit,
    Lambda,
    MkPair,
    Var,
    compose,
    expr_size,
    fill_leftmost,
    has_holes,
    is_closed,
    leftmost_hole,
    subst_var,
)
from propsig.parser import parse_expr
from propsig.printer import print_expr
from propsig.typecheck import infer_type
from propsig.types import INT, FunT, PairT, parse_type


def test_leftmost_hole_order():
    e = MkPair(Hole(INT), Hole(PairT(INT, INT)))
    h, scope = leftmost_hole(e)
    assert h.hole_type == INT and scope == ()


def test_leftmost_hole_scope_tracks_binders():
    lam = Lambda(INT, Lambda(PairT(INT, INT), Hole(INT)))
    h, scope = leftmost_hole(lam)
    # innermost binder last
    assert scope == (INT, PairT(INT, INT))


def test_fill_leftmost_replaces_only_first():
    e = MkPair(Hole(INT), Hole(INT))
    filled = fill_leftmost(e, IntLit(7))
    assert filled == MkPair(IntLit(7), Hole(INT))


def test_fill_leftmost_without_hole_raises():
    with pytest.raises(ValueError):
        fill_leftmost(IntLit(1), IntLit(2))


def test_has_holes_and_closed():
    assert has_holes(Hole(INT))
    assert not has_holes(IntLit(3))
    assert is_closed(Lambda(INT, Var(0)))
    assert not is_closed(Var(0))


def test_subst_var_shifts_free_indices():
    # (\. var1) with var0 substituted under the binder must not capture
    inner = Lambda(INT, Var(1))
    substituted = subst_var(inner, 0, Var(5))
    assert substituted == Lambda(INT, Var(6))


def test_expr_size_counts_nodes():
    e = parse_expr("\\(a: Int) { add(a, 1) }", parse_type("(Int) -> Int"))
    # lambda, apply, var, literal
    assert expr_size(e) == 4


def test_compose_beta_expands():
    f = parse_expr("\\(a: Int) { mul(a, a) }", parse_type("(Int) -> Int"))
    g = parse_expr("\\(a: Int) { add(a, 1) }", parse_type("(Int) -> Int"))
    fg = compose(f, g)
    assert infer_type(fg) == FunT(INT, INT)
    assert print_expr(fg) == "\\(a2:Int) { mul(add(a2, 1), add(a2, 1)) }"


def test_compose_is_capture_avoiding():
    f = parse_expr(
        "\\(a: List<Int>) { map<Int, Int>(a, \\(b: Int) { add(b, len<Int>(a)) }) }",
        parse_type("(List<Int>) -> List<Int>"),
    )
    g = parse_expr("\\(a: List<Int>) { reverse<Int>(a) }",
                   parse_type("(List<Int>) -> List<Int>"))
    fg = compose(f, g)
    assert infer_type(fg) == parse_type("(List<Int>) -> List<Int>")
    from propsig.evalcore import evaluate
    from propsig.values import Ok
    out = evaluate(fg, [1, 2, 3])
    # f(g([1,2,3])) = map(+3) over [3,2,1]
    assert out == Ok([6, 5, 4])
