"""Evaluator semantics, fuel accounting, and cross-kernel agreement.

Both kernels must agree bit-for-bit on (outcome, fuel remaining) for the
same (program, input, fuel) triple; the fuel schedule is part of the
contract, not an implementation detail.
"""
import pytest
from hypothesis import given, settings, strategies as st

from propsig.evalcore import (
    DEFAULT_FUEL,
    KERNEL_NAME,
    compile_expr,
    evaluate,
    kernels,
)
from propsig.parser import parse_expr
from propsig.types import parse_type
from propsig.values import FuelExhausted, Ok, RunError

ALL_KERNELS = kernels()


def run(text, arg, fuel=DEFAULT_FUEL, ty=None):
    e = parse_expr(text, parse_type(ty) if ty else None)
    return evaluate(e, arg, fuel)


SEMANTICS = [
    ("\\(a: Int) { mul(a, a) }", 7, Ok(49)),
    ("\\(a: Int) { add(a, 1) }", -1, Ok(0)),
    ("\\(a: (Int, Int)) { (snd(a), fst(a)) }", (3, 7), Ok((7, 3))),
    ("\\(a: List<Int>) { reverse<Int>(a) }", [1, 2, 3], Ok([3, 2, 1])),
    ("\\(a: List<Int>) { concat<Int>(reverse<Int>(a), a) }", [1, 2],
     Ok([2, 1, 1, 2])),
    ("\\(a: List<Int>) { sort(a) }", [3, 1, 2], Ok([1, 2, 3])),
    ("\\(a: List<Int>) { distinct<Int>(a) }", [1, 2, 1, 3, 2], Ok([1, 2, 3])),
    ("\\(a: Int) { range(0, a) }", 4, Ok([0, 1, 2, 3])),
    ("\\(a: Int) { replicate<Int>(a, a) }", 3, Ok([3, 3, 3])),
    ("\\(a: Int) { replicate<Int>(a, a) }", -2, Ok([])),
    ("\\(a: (List<Int>, Int)) { take<Int>(fst(a), snd(a)) }", ([1, 2, 3], 5),
     Ok([1, 2, 3])),
    ("\\(a: List<Int>) { map<Int, Int>(a, \\(x: Int) { add(x, x) }) }",
     [1, 2], Ok([2, 4])),
    ("\\(a: List<Int>) { filter<Int>(a, \\(x: Int) { gt(x, 0) }) }",
     [1, -2, 3], Ok([1, 3])),
    ("\\(a: List<Int>) { foldl<Int, Int>(a, 0, \\(p: (Int, Int)) { add(fst(p), snd(p)) }) }",
     [1, 2, 3], Ok(6)),
    ("\\(a: (List<Int>, List<Int>)) { zip_with<Int, Int, Int>(fst(a), snd(a), \\(p: (Int, Int)) { add(fst(p), snd(p)) }) }",
     ([1, 2], [10, 20, 30]), Ok([11, 22])),
    ("\\(a: List<Int>) { for_all<Int>(a, \\(x: Int) { gt(x, 0) }) }",
     [], Ok(True)),
    ("\\(a: List<Int>) { find_index<Int>(a, \\(x: Int) { is_even(x) }) }",
     [1, 3, 4], Ok(2)),
    ("\\(a: List<Int>) { find_index<Int>(a, \\(x: Int) { is_even(x) }) }",
     [1, 3, 5], Ok(-1)),
    # errors
    ("\\(a: Int) { div(a, 0) }", 1, RunError("DivByZero")),
    ("\\(a: List<Int>) { head<Int>(a) }", [], RunError("EmptyListAccess")),
    ("\\(a: (List<Int>, Int)) { index<Int>(fst(a), snd(a)) }", ([1], 5),
     RunError("IndexOutOfBounds")),
]


@pytest.mark.parametrize("text,arg,expected", SEMANTICS)
def test_semantics(text, arg, expected):
    assert run(text, arg) == expected


def test_wrapping_arithmetic_is_64_bit():
    big = 2**62
    out = run("\\(a: Int) { mul(a, a) }", big)
    assert isinstance(out, Ok)
    assert out.value == (big * big + 2**63) % 2**64 - 2**63


def test_fuel_exhaustion():
    # product over a long list with tiny fuel
    out = run("\\(a: List<Int>) { sum(a) }", list(range(50)), fuel=10)
    assert isinstance(out, FuelExhausted)


def test_evaluate_rejects_holes():
    e = parse_expr("\\(a: Int) { add(a, ?) }", parse_type("(Int) -> Int"))
    with pytest.raises(ValueError):
        compile_expr(e)


def _cross_kernel(text, arg, fuel, ty=None):
    e = parse_expr(text, parse_type(ty) if ty else None)
    code = compile_expr(e).code
    results = {}
    for name, k in ALL_KERNELS.items():
        results[name] = k.run_with_fuel(code, arg, fuel)
    return results


CROSS_CASES = [(t, a) for t, a, _ in SEMANTICS]


@pytest.mark.parametrize("text,arg", CROSS_CASES)
def test_kernels_agree_bit_for_bit(text, arg):
    for fuel in (5, 17, 100, DEFAULT_FUEL):
        results = _cross_kernel(text, arg, fuel)
        vals = list(results.values())
        assert all(v == vals[0] for v in vals), (text, arg, fuel, results)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(min_value=-50, max_value=50), max_size=8),
       st.integers(min_value=1, max_value=60))
def test_kernels_agree_on_random_inputs(xs, fuel):
    text = ("\\(a: List<Int>) { concat<Int>(sort(a), "
            "filter<Int>(a, \\(x: Int) { is_even(x) })) }")
    results = _cross_kernel(text, xs, fuel)
    vals = list(results.values())
    assert all(v == vals[0] for v in vals)


def test_active_kernel_is_compiled_when_available():
    if "cython" in ALL_KERNELS:
        assert KERNEL_NAME == "cython"
    else:
        assert KERNEL_NAME == "pure"


def test_closure_application_charges_fuel_identically():
    text = "\\(a: List<Int>) { map<Int, Int>(a, \\(x: Int) { mul(x, x) }) }"
    for fuel in range(1, 40):
        results = _cross_kernel(text, [1, 2, 3], fuel)
        vals = list(results.values())
        assert all(v == vals[0] for v in vals), fuel
