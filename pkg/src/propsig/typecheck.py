"""Type inference for expressions.

Every well-formed expression has a unique type given the binder
environment (innermost last); holes contribute their annotation.
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
from .components import catalog
from .printer import print_expr
from .types import BOOL, FunT, INT, ListT, PairT, Type, subst_type, type_to_str


class TypeCheckError(TypeError):
    def __init__(self, msg: str, offender: Expr):
        super().__init__(f"{msg} in `{print_expr(offender)}`")
        self.offender = offender


def infer_type(e: Expr, env: list[Type] | tuple[Type, ...] = ()) -> Type:
    k = e.KIND
    if k == K_VAR:
        if not 0 <= e.index < len(env):
            raise TypeCheckError(f"unbound variable index {e.index}", e)
        return env[len(env) - 1 - e.index]
    if k == K_INT:
        return INT
    if k == K_BOOL:
        return BOOL
    if k == K_NIL:
        return ListT(e.elem)
    if k == K_HOLE:
        if e.hole_type is None:
            raise TypeCheckError("hole has no type annotation", e)
        return e.hole_type
    if k == K_LAMBDA:
        body = infer_type(e.body, tuple(env) + (e.param_type,))
        return FunT(e.param_type, body)
    if k == K_MKPAIR:
        return PairT(infer_type(e.fst, env), infer_type(e.snd, env))
    if k == K_FST:
        pt = infer_type(e.pair, env)
        if not isinstance(pt, PairT):
            raise TypeCheckError(f"fst applied to non-pair of type {pt}", e)
        return pt.fst
    if k == K_SND:
        pt = infer_type(e.pair, env)
        if not isinstance(pt, PairT):
            raise TypeCheckError(f"snd applied to non-pair of type {pt}", e)
        return pt.snd
    if k == K_APPLY:
        comp = catalog().by_name.get(e.component)
        if comp is None:
            raise TypeCheckError(f"unknown component {e.component!r}", e)
        if len(e.type_args) != comp.scheme.n_vars:
            raise TypeCheckError(
                f"{comp.name} expects {comp.scheme.n_vars} type arguments", e
            )
        if len(e.args) != comp.arity:
            raise TypeCheckError(f"{comp.name} expects {comp.arity} arguments", e)
        bindings = dict(enumerate(e.type_args))
        for i, (param, arg) in enumerate(zip(comp.scheme.params, e.args)):
            want = subst_type(param, bindings)
            got = infer_type(arg, env)
            if got != want:
                raise TypeCheckError(
                    f"{comp.name} argument {i + 1} has type {type_to_str(got)}, "
                    f"expected {type_to_str(want)}",
                    arg,
                )
        return subst_type(comp.scheme.ret, bindings)
    raise TypeCheckError("unknown expression kind", e)


def well_typed(e: Expr, env: tuple[Type, ...] = ()) -> bool:
    try:
        infer_type(e, env)
        return True
    except TypeCheckError:
        return False
