"""Evaluator front end: flat-form compiler and kernel selection.

Closed expressions compile once into a flat int64 instruction array and
then run many times (against spec pairs, probe inputs, or property
pairs).  Two interchangeable kernels interpret that form: a Cython
extension (propsig._evalcy) and a pure-Python fallback (propsig._evalpy).
The extension is used when importable; set PROPSIG_PURE_EVAL=1 to force
the fallback.  Both implement the identical semantics and fuel schedule.

Fuel: 1 per node visit and per closure call, plus per-element charges
inside list components; default budget per (program, input) is 10,000.
"""

from __future__ import annotations

import os
from array import array
from dataclasses import dataclass
from typing import Any

from .ast import (
    Expr,
    K_APPLY,
    K_BOOL,
    K_FST,
    K_HOLE,
    K_INT,
    K_LAMBDA,
    K_MKPAIR,
    K_NIL,
    K_SND,
    K_VAR,
)
from .components import LITERAL_EXPANSIONS, catalog

DEFAULT_FUEL = 10000

if os.environ.get("PROPSIG_PURE_EVAL") == "1":
    from . import _evalpy as _kernel
else:
    try:
        from . import _evalcy as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _evalpy as _kernel

KERNEL_NAME = _kernel.KERNEL_NAME

C_VAR, C_INT, C_BOOL, C_NIL, C_LAMBDA, C_APPLY, C_MKPAIR, C_FST, C_SND = range(9)

# the kernels dispatch on hard-coded component ids; pin the catalog order
_EXPECTED_ORDER = (
    "add sub mul div mod neg abs min max is_even eq neq lt leq gt geq "
    "and or not zero one two neg_one true false nil mk_pair fst snd "
    "cons head tail last len reverse concat take drop index contains count "
    "sum product maximum minimum sort distinct range replicate "
    "map filter foldl foldr zip_with for_all exists find_index"
).split()
assert [c.name for c in catalog()] == _EXPECTED_ORDER, "catalog order drifted"

_LITERAL_CODES = {
    "zero": (C_INT, 0),
    "one": (C_INT, 1),
    "two": (C_INT, 2),
    "neg_one": (C_INT, -1),
    "true": (C_BOOL, 1),
    "false": (C_BOOL, 0),
}


@dataclass(frozen=True, slots=True)
class Compiled:
    code: array
    source: Expr


def compile_expr(e: Expr) -> Compiled:
    """Flatten a hole-free expression; raises ValueError on holes."""
    buf: list[int] = []
    _emit(e, buf)
    return Compiled(array("q", buf), e)


def _emit(e: Expr, buf: list[int]) -> None:
    k = e.KIND
    if k == K_VAR:
        buf += (C_VAR, e.index)
    elif k == K_INT:
        buf += (C_INT, e.value)
    elif k == K_BOOL:
        buf += (C_BOOL, 1 if e.value else 0)
    elif k == K_NIL:
        buf.append(C_NIL)
    elif k == K_LAMBDA:
        buf += (C_LAMBDA, 0)
        at = len(buf) - 1
        _emit(e.body, buf)
        buf[at] = len(buf) - at - 1
    elif k == K_APPLY:
        name = e.component
        lit = _LITERAL_CODES.get(name)
        if lit is not None:
            buf += lit
        elif name == "nil":
            buf.append(C_NIL)
        elif name == "mk_pair":
            buf.append(C_MKPAIR)
            _emit(e.args[0], buf)
            _emit(e.args[1], buf)
        elif name in ("fst", "snd"):
            buf.append(C_FST if name == "fst" else C_SND)
            _emit(e.args[0], buf)
        else:
            buf += (C_APPLY, catalog().by_name[name].cid, len(e.args))
            for arg in e.args:
                _emit(arg, buf)
    elif k == K_MKPAIR:
        buf.append(C_MKPAIR)
        _emit(e.fst, buf)
        _emit(e.snd, buf)
    elif k == K_FST:
        buf.append(C_FST)
        _emit(e.pair, buf)
    elif k == K_SND:
        buf.append(C_SND)
        _emit(e.pair, buf)
    elif k == K_HOLE:
        raise ValueError("cannot compile an expression with holes")
    else:
        raise ValueError(f"cannot compile node kind {k}")


def evaluate(program: Expr, arg: Any, fuel: int = DEFAULT_FUEL):
    """Run a closed function-typed program on one argument."""
    if fuel < 1:
        raise ValueError("fuel must be positive")
    return _kernel.run(compile_expr(program).code, arg, fuel)


def evaluate_compiled(c: Compiled, arg: Any, fuel: int = DEFAULT_FUEL):
    return _kernel.run(c.code, arg, fuel)


def outcomes_compiled(c: Compiled, inputs, fuel: int = DEFAULT_FUEL) -> list:
    return _kernel.outcomes(c.code, inputs, fuel)


def check_pairs_compiled(c: Compiled, pairs, fuel: int = DEFAULT_FUEL) -> bool:
    return _kernel.check_pairs(c.code, pairs, fuel)


def property_abstract_compiled(c: Compiled, pairs, fuel: int = DEFAULT_FUEL) -> int:
    """0 AllTrue / 1 AllFalse / 2 Mixed with errors totalized to false."""
    return _kernel.property_abstract(c.code, pairs, fuel)


def kernels() -> dict[str, Any]:
    """Both kernels when available, keyed by name (for equivalence tests)."""
    from . import _evalpy

    out = {_evalpy.KERNEL_NAME: _evalpy}
    try:
        from . import _evalcy  # type: ignore[attr-defined]

        out[_evalcy.KERNEL_NAME] = _evalcy
    except ImportError:
        pass
    return out
