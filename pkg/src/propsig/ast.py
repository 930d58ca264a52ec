"""Expression trees.

Variables are de Bruijn indices (Var(0) is the innermost binder).  A
closed program has no Hole nodes and no free indices.  Hole equality
ignores the id field, which exists only to tell holes apart while a
partial program is being expanded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .types import Type

_hole_ids = itertools.count()

# kind tags used by the evaluator kernels for dispatch
K_VAR, K_INT, K_BOOL, K_NIL, K_LAMBDA, K_APPLY, K_MKPAIR, K_FST, K_SND, K_HOLE = range(10)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def wrap64(n: int) -> int:
    """Wrap an arbitrary int to 64-bit signed two's complement."""
    return (n - INT64_MIN) % 2**64 + INT64_MIN


class Expr:
    __slots__ = ()

    def __str__(self):
        from .printer import print_expr

        return print_expr(self)


@dataclass(frozen=True, slots=True)
class Var(Expr):
    index: int
    KIND = K_VAR


@dataclass(frozen=True, slots=True)
class IntLit(Expr):
    value: int
    KIND = K_INT


@dataclass(frozen=True, slots=True)
class BoolLit(Expr):
    value: bool
    KIND = K_BOOL


@dataclass(frozen=True, slots=True)
class NilLit(Expr):
    elem: Type
    KIND = K_NIL


@dataclass(frozen=True, slots=True)
class Lambda(Expr):
    param_type: Type
    body: Expr
    KIND = K_LAMBDA


@dataclass(frozen=True, slots=True)
class Apply(Expr):
    component: str
    type_args: tuple[Type, ...]
    args: tuple[Expr, ...]
    KIND = K_APPLY


@dataclass(frozen=True, slots=True)
class MkPair(Expr):
    fst: Expr
    snd: Expr
    KIND = K_MKPAIR


@dataclass(frozen=True, slots=True)
class Fst(Expr):
    pair: Expr
    KIND = K_FST


@dataclass(frozen=True, slots=True)
class Snd(Expr):
    pair: Expr
    KIND = K_SND


@dataclass(frozen=True, slots=True)
class Hole(Expr):
    hole_type: Type | None = None
    id: int = field(default_factory=lambda: next(_hole_ids), compare=False)
    KIND = K_HOLE


def children(e: Expr) -> tuple[Expr, ...]:
    k = e.KIND
    if k == K_LAMBDA:
        return (e.body,)
    if k == K_APPLY:
        return e.args
    if k == K_MKPAIR:
        return (e.fst, e.snd)
    if k in (K_FST, K_SND):
        return (e.pair,)
    return ()


def walk(e: Expr):
    """Preorder traversal."""
    yield e
    for c in children(e):
        yield from walk(c)


def has_holes(e: Expr) -> bool:
    return any(n.KIND == K_HOLE for n in walk(e))


def expr_size(e: Expr) -> int:
    return sum(1 for _ in walk(e))


def max_free_index(e: Expr, depth: int = 0) -> int:
    """Largest free de Bruijn index, or -1 when none."""
    if e.KIND == K_VAR:
        return e.index - depth if e.index >= depth else -1
    if e.KIND == K_LAMBDA:
        return max_free_index(e.body, depth + 1)
    out = -1
    for c in children(e):
        out = max(out, max_free_index(c, depth))
    return out


def is_closed(e: Expr) -> bool:
    return not has_holes(e) and max_free_index(e) < 0


def _rebuild(e: Expr, new_children: tuple[Expr, ...]) -> Expr:
    k = e.KIND
    if k == K_LAMBDA:
        return Lambda(e.param_type, new_children[0])
    if k == K_APPLY:
        return Apply(e.component, e.type_args, new_children)
    if k == K_MKPAIR:
        return MkPair(new_children[0], new_children[1])
    if k == K_FST:
        return Fst(new_children[0])
    if k == K_SND:
        return Snd(new_children[0])
    return e


def shift(e: Expr, d: int, cutoff: int = 0) -> Expr:
    """Add d to every free index ≥ cutoff."""
    k = e.KIND
    if k == K_VAR:
        return Var(e.index + d) if e.index >= cutoff else e
    if k == K_LAMBDA:
        return Lambda(e.param_type, shift(e.body, d, cutoff + 1))
    cs = children(e)
    if not cs:
        return e
    return _rebuild(e, tuple(shift(c, d, cutoff) for c in cs))


def subst_var(e: Expr, j: int, s: Expr) -> Expr:
    """Capture-avoiding substitution of s for Var(j) in e."""
    k = e.KIND
    if k == K_VAR:
        if e.index == j:
            return shift(s, j)
        return Var(e.index - 1) if e.index > j else e
    if k == K_LAMBDA:
        return Lambda(e.param_type, subst_var(e.body, j + 1, s))
    cs = children(e)
    if not cs:
        return e
    return _rebuild(e, tuple(subst_var(c, j, s) for c in cs))


def compose(outer: Lambda, inner: Lambda) -> Lambda:
    """outer ∘ inner as one Lambda: x ↦ outer(inner(x)).

    Both arguments must be closed unary lambdas; the result beta-expands
    outer's body with inner's body in place of its parameter.
    """
    if not (isinstance(outer, Lambda) and isinstance(inner, Lambda)):
        raise TypeError("compose expects two Lambda programs")
    return Lambda(inner.param_type, subst_var(outer.body, 0, inner.body))


def leftmost_hole(e: Expr, scope: tuple[Type, ...] = ()) -> tuple[Hole, tuple[Type, ...]] | None:
    """First hole in preorder, with the binder types in scope, innermost last."""
    if e.KIND == K_HOLE:
        return e, scope
    if e.KIND == K_LAMBDA:
        return leftmost_hole(e.body, scope + (e.param_type,))
    for c in children(e):
        found = leftmost_hole(c, scope)
        if found is not None:
            return found
    return None


def fill_leftmost(e: Expr, replacement: Expr) -> Expr:
    """Replace the leftmost hole; raises ValueError when e has none."""
    out = _fill(e, replacement)
    if out is None:
        raise ValueError("expression has no holes")
    return out


def _fill(e: Expr, replacement: Expr) -> Expr | None:
    if e.KIND == K_HOLE:
        return replacement
    if e.KIND == K_LAMBDA:
        body = _fill(e.body, replacement)
        return None if body is None else Lambda(e.param_type, body)
    cs = children(e)
    for i, c in enumerate(cs):
        filled = _fill(c, replacement)
        if filled is not None:
            return _rebuild(e, cs[:i] + (filled,) + cs[i + 1 :])
    return None
