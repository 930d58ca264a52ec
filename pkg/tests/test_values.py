"""Runtime values: literal syntax, typing, equality."""
import pytest

from propsig.types import BOOL, INT, FunT, ListT, PairT, parse_type
from propsig.values import (
    ClosureValue,
    parse_value,
    value_has_type,
    value_to_str,
    values_equal,
)

CASES = [
    ("0", INT, 0),
    ("-42", INT, -42),
    ("true", BOOL, True),
    ("false", BOOL, False),
    ("[]", ListT(INT), []),
    ("[1, 2, 3]", ListT(INT), [1, 2, 3]),
    ("(1, [2])", PairT(INT, ListT(INT)), (1, [2])),
    ("[(1, 2)]", ListT(PairT(INT, INT)), [(1, 2)]),
]


@pytest.mark.parametrize("text,ty,val", CASES)
def test_parse(text, ty, val):
    assert parse_value(text, ty) == val


@pytest.mark.parametrize("text,ty,val", CASES)
def test_round_trip(text, ty, val):
    assert parse_value(value_to_str(val), ty) == val


@pytest.mark.parametrize("text,ty", [
    ("true", INT),
    ("1", BOOL),
    ("[1, true]", ListT(INT)),
    ("(1)", PairT(INT, INT)),
    ("[1", ListT(INT)),
])
def test_parse_rejects_ill_typed(text, ty):
    with pytest.raises(ValueError):
        parse_value(text, ty)


def test_value_has_type():
    assert value_has_type([1, 2], ListT(INT))
    assert not value_has_type([1, True], ListT(INT))
    assert value_has_type((1, True), PairT(INT, BOOL))
    assert not value_has_type((1, 2), PairT(INT, BOOL))
    assert not value_has_type(3, FunT(INT, INT))


def test_closures_type_as_functions():
    from propsig.evalcore import evaluate
    from propsig.parser import parse_expr
    from propsig.values import Ok

    e = parse_expr("\\(a: Int) { \\(b: Int) { add(a, b) } }")
    out = evaluate(e, 4)
    assert isinstance(out, Ok)
    clo = out.value
    assert isinstance(clo, ClosureValue)
    assert value_has_type(clo, FunT(INT, INT))


def test_values_equal_structural():
    assert values_equal([1, (2, 3)], [1, (2, 3)])
    assert not values_equal([1], [1, 1])
    assert not values_equal(True, 1)


def test_values_equal_rejects_closures():
    from propsig.evalcore import evaluate
    from propsig.parser import parse_expr

    clo = evaluate(parse_expr("\\(a: Int) { \\(b: Int) { a } }"), 1).value
    with pytest.raises(ValueError):
        values_equal(clo, clo)


def test_int_range_checked():
    with pytest.raises(ValueError):
        parse_value(str(2**63), INT)
    assert parse_value(str(2**63 - 1), INT) == 2**63 - 1
