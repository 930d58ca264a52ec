"""Expression parser for the canonical syntax.

Grammar (no infix operators, whitespace insignificant):
    expr   := '\\' '(' ident ':' type ')' '{' expr '}'
            | 'fst' atom | 'snd' atom
            | component ('<' type {',' type} '>')? '(' [expr {',' expr}] ')'
            | 'nil' '<' type '>'
            | 'true' | 'false' | integer | '?' | ident
            | '(' expr [',' expr] ')'
Parenthesized pairs build MkPair; a lone parenthesized expr is grouping.
Holes parse unannotated; parse_expr(text, expected) re-derives hole
types from context where the structure determines them.
"""

from __future__ import annotations

from .ast import (
    Apply,
    BoolLit,
    Expr,
    Fst,
    Hole,
    IntLit,
    K_APPLY,
    K_FST,
    K_HOLE,
    K_LAMBDA,
    K_MKPAIR,
    K_SND,
    Lambda,
    MkPair,
    NilLit,
    Snd,
    Var,
)
from .components import LITERAL_EXPANSIONS, catalog
from .types import FunT, PairT, Type, TypeParseError, _TypeParser, subst_type


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos


_KEYWORDS = {"true", "false", "nil", "fst", "snd"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.binders: list[str] = []  # innermost last
        self.catalog = catalog()

    def error(self, msg: str):
        raise ParseError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, tok: str) -> bool:
        self.skip_ws()
        if self.text.startswith(tok, self.pos):
            self.pos += len(tok)
            return True
        return False

    def expect(self, tok: str):
        if not self.eat(tok):
            self.error(f"expected {tok!r}")

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and (
            self.text[self.pos].isalpha() or self.text[self.pos] == "_"
        ):
            self.pos += 1
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
        if self.pos == start:
            self.error("expected an identifier")
        return self.text[start : self.pos]

    def parse_type(self) -> Type:
        tp = _TypeParser(self.text)
        tp.pos = self.pos
        try:
            t = tp.ty()
        except TypeParseError as err:
            raise ParseError(str(err), err.pos) from None
        self.pos = tp.pos
        return t

    def expr(self) -> Expr:
        ch = self.peek()
        if ch == "\\":
            return self.lamb()
        return self.atom()

    def lamb(self) -> Expr:
        self.expect("\\")
        self.expect("(")
        name = self.ident()
        self.expect(":")
        param = self.parse_type()
        self.expect(")")
        self.expect("{")
        self.binders.append(name)
        body = self.expr()
        self.binders.pop()
        self.expect("}")
        return Lambda(param, body)

    def atom(self) -> Expr:
        ch = self.peek()
        if ch == "?":
            self.pos += 1
            return Hole(None)
        if ch == "(":
            self.pos += 1
            first = self.expr()
            if self.eat(","):
                second = self.expr()
                self.expect(")")
                return MkPair(first, second)
            self.expect(")")
            return first
        if ch == "-" or ch.isdigit():
            return self.integer()
        name = self.ident()
        if name == "true":
            return BoolLit(True)
        if name == "false":
            return BoolLit(False)
        if name == "nil":
            self.expect("<")
            elem = self.parse_type()
            self.expect(">")
            return NilLit(elem)
        if name == "fst":
            return Fst(self.atom())
        if name == "snd":
            return Snd(self.atom())
        comp = self.catalog.by_name.get(name)
        if comp is not None and self.peek() in "<(":
            if name in LITERAL_EXPANSIONS:
                self.error(f"literal component {name!r} has no call syntax")
            type_args: tuple[Type, ...] = ()
            if self.eat("<"):
                targs = [self.parse_type()]
                while self.eat(","):
                    targs.append(self.parse_type())
                self.expect(">")
                type_args = tuple(targs)
            if len(type_args) != comp.scheme.n_vars:
                self.error(
                    f"{name} takes {comp.scheme.n_vars} type arguments, got {len(type_args)}"
                )
            self.expect("(")
            args: list[Expr] = []
            if not self.eat(")"):
                args.append(self.expr())
                while self.eat(","):
                    args.append(self.expr())
                self.expect(")")
            if len(args) != comp.arity:
                self.error(f"{name} takes {comp.arity} arguments, got {len(args)}")
            return Apply(name, type_args, tuple(args))
        # plain identifier: a binder reference, innermost match wins
        for depth_back, bname in enumerate(reversed(self.binders)):
            if bname == name:
                return Var(depth_back)
        self.pos -= len(name)
        self.error(f"unbound identifier {name!r}")

    def integer(self) -> Expr:
        self.skip_ws()
        start = self.pos
        if self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        lit = self.text[start : self.pos]
        if lit in ("", "-"):
            self.error("expected an integer literal")
        n = int(lit)
        if not -(2**63) <= n < 2**63:
            self.pos = start
            self.error("integer literal out of 64-bit range")
        return IntLit(n)


def parse_expr(text: str, expected: Type | None = None) -> Expr:
    """Parse canonical syntax; `expected` re-annotates hole types."""
    p = _Parser(text)
    e = p.expr()
    p.skip_ws()
    if p.pos != len(text):
        p.error("trailing input")
    if expected is not None:
        e = _annotate(e, expected)
    return e


def _annotate(e: Expr, t: Type | None) -> Expr:
    """Push expected types down to unannotated holes where determined."""
    if t is None:
        return e
    k = e.KIND
    if k == K_HOLE:
        return e if e.hole_type is not None else Hole(t)
    if k == K_LAMBDA and isinstance(t, FunT):
        return Lambda(e.param_type, _annotate(e.body, t.ret))
    if k == K_MKPAIR and isinstance(t, PairT):
        return MkPair(_annotate(e.fst, t.fst), _annotate(e.snd, t.snd))
    if k in (K_FST, K_SND):
        # the pair's other slot is not determined by context; recurse blind
        return e
    if k == K_APPLY:
        comp = catalog().by_name[e.component]
        bindings = dict(enumerate(e.type_args))
        params = tuple(subst_type(p, bindings) for p in comp.scheme.params)
        return Apply(
            e.component,
            e.type_args,
            tuple(_annotate(a, pt) for a, pt in zip(e.args, params)),
        )
    return e
