"""Runtime values, evaluation outcomes, and the literal value syntax.

Values map onto plain Python data: Int is int (kept in signed 64-bit
range by the evaluator), Bool is bool, List<T> is list, (T, U) is a
2-tuple, and function values are ClosureValue subclasses owned by the
evaluator kernels.  Literal syntax: integers, true/false, [..] lists,
(..) pairs.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
from typing import Any

from .types import BOOL, INT, BoolT, FunT, IntT, ListT, PairT, Type

DIV_BY_ZERO = "DivByZero"
EMPTY_LIST_ACCESS = "EmptyListAccess"
INDEX_OUT_OF_BOUNDS = "IndexOutOfBounds"


class ClosureValue(abc.ABC):
    """Base for kernel-specific function values; opaque and incomparable.

    An ABC so the compiled kernel's extension-type closures can register
    as virtual subclasses instead of inheriting.
    """

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Ok:
    value: Any


@dataclass(frozen=True, slots=True)
class RunError:
    kind: str


@dataclass(frozen=True, slots=True)
class FuelExhausted:
    pass


FUEL_EXHAUSTED = FuelExhausted()


class EvalCrash(Exception):
    """Internal kernel signal for a RunError outcome."""

    def __init__(self, kind: str):
        self.kind = kind


class OutOfFuel(Exception):
    """Internal kernel signal for a FuelExhausted outcome."""


def values_equal(a: Any, b: Any) -> bool:
    """Structural equality on first-order values.

    bool and int are distinct even though Python bools are ints; closures
    are rejected (ValueError) per the first-order contract.
    """
    if isinstance(a, ClosureValue) or isinstance(b, ClosureValue):
        raise ValueError("values_equal is defined only on first-order values")
    a_bool, b_bool = type(a) is bool, type(b) is bool
    if a_bool or b_bool:
        return a_bool and b_bool and a == b
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, tuple) and isinstance(b, tuple):
        return (
            len(a) == 2
            and len(b) == 2
            and values_equal(a[0], b[0])
            and values_equal(a[1], b[1])
        )
    return False


def value_has_type(v: Any, t: Type) -> bool:
    """Structural type check (used by soundness tests and task loading)."""
    if isinstance(t, IntT):
        return type(v) is int
    if isinstance(t, BoolT):
        return type(v) is bool
    if isinstance(t, ListT):
        return isinstance(v, list) and all(value_has_type(x, t.elem) for x in v)
    if isinstance(t, PairT):
        return (
            isinstance(v, tuple)
            and len(v) == 2
            and value_has_type(v[0], t.fst)
            and value_has_type(v[1], t.snd)
        )
    if isinstance(t, FunT):
        return isinstance(v, ClosureValue)
    return False


def value_to_str(v: Any) -> str:
    """Canonical literal text; inverse of parse_value at the value's type."""
    if type(v) is bool:
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, list):
        return "[" + ", ".join(value_to_str(x) for x in v) + "]"
    if isinstance(v, tuple):
        return f"({value_to_str(v[0])}, {value_to_str(v[1])})"
    raise ValueError(f"not a serializable value: {v!r}")


class ValueParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos


class _ValueParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise ValueParseError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def eat(self, tok: str) -> bool:
        self.skip_ws()
        if self.text.startswith(tok, self.pos):
            self.pos += len(tok)
            return True
        return False

    def expect(self, tok: str):
        if not self.eat(tok):
            self.error(f"expected {tok!r}")

    def value(self, t: Type) -> Any:
        self.skip_ws()
        if isinstance(t, IntT):
            return self.integer()
        if isinstance(t, BoolT):
            if self.eat("true"):
                return True
            if self.eat("false"):
                return False
            self.error("expected true or false")
        if isinstance(t, ListT):
            self.expect("[")
            out = []
            if not self.eat("]"):
                out.append(self.value(t.elem))
                while self.eat(","):
                    out.append(self.value(t.elem))
                self.expect("]")
            return out
        if isinstance(t, PairT):
            self.expect("(")
            first = self.value(t.fst)
            self.expect(",")
            second = self.value(t.snd)
            self.expect(")")
            return (first, second)
        self.error(f"values of type {t} have no literal form")

    def integer(self) -> int:
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            self.error("expected an integer")
        n = int(self.text[start : self.pos])
        if not -(2**63) <= n < 2**63:
            self.pos = start
            self.error("integer out of 64-bit range")
        return n


def parse_value(text: str, t: Type) -> Any:
    """Parse a literal of type t; raises ValueParseError on bad input."""
    p = _ValueParser(text)
    v = p.value(t)
    p.skip_ws()
    if p.pos != len(text):
        p.error("trailing input")
    return v


def outcome_to_str(outcome: Any) -> str:
    """Canonical one-line form, used in observational fingerprints."""
    if isinstance(outcome, Ok):
        return "Ok " + value_to_str(outcome.value)
    if isinstance(outcome, RunError):
        return "RuntimeError " + outcome.kind
    if isinstance(outcome, FuelExhausted):
        return "FuelExhausted"
    raise ValueError(f"not an outcome: {outcome!r}")
