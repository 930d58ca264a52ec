"""Canonical expression rendering.

Binder at lambda-nesting depth d is named a{d+2} (the numbering leaves
a0/a1 unused, matching the synthesis trajectory examples).  The printed
form is the single source of canonical text: property lengths and
shortest-tie-breaking measure len(print_expr(e)) in bytes.
"""

from __future__ import annotations

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
from .types import type_to_str


def binder_name(depth: int) -> str:
    return f"a{depth + 2}"


def print_expr(e: Expr, depth: int = 0) -> str:
    k = e.KIND
    if k == K_VAR:
        if e.index >= depth:
            return f"#{e.index}"  # free variable; not parseable on purpose
        return binder_name(depth - 1 - e.index)
    if k == K_INT:
        return str(e.value)
    if k == K_BOOL:
        return "true" if e.value else "false"
    if k == K_NIL:
        return f"nil<{type_to_str(e.elem)}>"
    if k == K_LAMBDA:
        head = f"\\({binder_name(depth)}:{type_to_str(e.param_type)})"
        return f"{head} {{ {print_expr(e.body, depth + 1)} }}"
    if k == K_APPLY:
        targs = ""
        if e.type_args:
            targs = "<" + ", ".join(type_to_str(t) for t in e.type_args) + ">"
        args = ", ".join(print_expr(a, depth) for a in e.args)
        return f"{e.component}{targs}({args})"
    if k == K_MKPAIR:
        return f"({print_expr(e.fst, depth)}, {print_expr(e.snd, depth)})"
    if k == K_FST:
        return f"fst({print_expr(e.pair, depth)})"
    if k == K_SND:
        return f"snd({print_expr(e.pair, depth)})"
    if k == K_HOLE:
        return "?"
    raise TypeError(f"not an Expr: {e!r}")


def canonical_length(e: Expr) -> int:
    """Byte length of the canonical rendering (ASCII, so len == bytes)."""
    return len(print_expr(e))
