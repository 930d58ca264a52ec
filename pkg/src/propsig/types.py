"""Type grammar for the object language.

Concrete programs are monomorphic: Int, Bool, List<T>, pairs (T, U) and
functions T -> U.  Type variables appear only inside library component
schemes and are eliminated by instantiation before any expression is
built.
"""

from __future__ import annotations

from dataclasses import dataclass


class Type:
    """Base class; all concrete node types are frozen dataclasses."""

    __slots__ = ()

    def __str__(self):
        return type_to_str(self)


@dataclass(frozen=True, slots=True)
class IntT(Type):
    pass


@dataclass(frozen=True, slots=True)
class BoolT(Type):
    pass


@dataclass(frozen=True, slots=True)
class ListT(Type):
    elem: Type


@dataclass(frozen=True, slots=True)
class PairT(Type):
    fst: Type
    snd: Type


@dataclass(frozen=True, slots=True)
class FunT(Type):
    arg: Type
    ret: Type


@dataclass(frozen=True, slots=True)
class TypeVar(Type):
    id: int


INT = IntT()
BOOL = BoolT()

# scheme variables print as single letters: a, b, c, ...
_VAR_LETTERS = "abcdefgh"


def type_to_str(t: Type) -> str:
    """Canonical text form; `->` is right-associative and lowest precedence."""
    if isinstance(t, IntT):
        return "Int"
    if isinstance(t, BoolT):
        return "Bool"
    if isinstance(t, ListT):
        return f"List<{type_to_str(t.elem)}>"
    if isinstance(t, PairT):
        return f"({type_to_str(t.fst)}, {type_to_str(t.snd)})"
    if isinstance(t, FunT):
        arg = type_to_str(t.arg)
        if isinstance(t.arg, FunT):
            arg = f"({arg})"
        return f"{arg} -> {type_to_str(t.ret)}"
    if isinstance(t, TypeVar):
        return _VAR_LETTERS[t.id]
    raise TypeError(f"not a Type: {t!r}")


class TypeParseError(ValueError):
    """Raised with a position when type text is malformed."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at offset {pos}")
        self.pos = pos


class _TypeParser:
    # grammar:  ty    := atom ('->' ty)?
    #           atom  := 'Int' | 'Bool' | 'List' '<' ty '>'
    #                  | '(' ty (',' ty)? ')' | ident
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise TypeParseError(msg, self.pos)

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

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        if self.pos == start:
            self.error("expected a type")
        return self.text[start : self.pos]

    def ty(self) -> Type:
        left = self.atom()
        if self.eat("->"):
            return FunT(left, self.ty())
        return left

    def atom(self) -> Type:
        self.skip_ws()
        if self.eat("("):
            first = self.ty()
            if self.eat(","):
                second = self.ty()
                self.expect(")")
                return PairT(first, second)
            self.expect(")")
            return first
        name = self.ident()
        if name == "Int":
            return INT
        if name == "Bool":
            return BOOL
        if name == "List":
            self.expect("<")
            elem = self.ty()
            self.expect(">")
            return ListT(elem)
        if name in _VAR_LETTERS:
            return TypeVar(_VAR_LETTERS.index(name))
        self.pos -= len(name)
        self.error(f"unknown type {name!r}")


def parse_type(text: str) -> Type:
    p = _TypeParser(text)
    t = p.ty()
    p.skip_ws()
    if p.pos != len(text):
        p.error("trailing input")
    return t


def is_ground(t: Type) -> bool:
    """True when t contains no type variables."""
    if isinstance(t, (IntT, BoolT)):
        return True
    if isinstance(t, ListT):
        return is_ground(t.elem)
    if isinstance(t, PairT):
        return is_ground(t.fst) and is_ground(t.snd)
    if isinstance(t, FunT):
        return is_ground(t.arg) and is_ground(t.ret)
    return False


def match_type(pattern: Type, concrete: Type, bindings: dict[int, Type]) -> bool:
    """One-way match: bind pattern's TypeVars so it equals concrete.

    Mutates `bindings`; on failure the dict may hold partial entries, so
    callers pass a scratch copy.  `concrete` must be ground.
    """
    if isinstance(pattern, TypeVar):
        bound = bindings.get(pattern.id)
        if bound is None:
            bindings[pattern.id] = concrete
            return True
        return bound == concrete
    if isinstance(pattern, IntT):
        return isinstance(concrete, IntT)
    if isinstance(pattern, BoolT):
        return isinstance(concrete, BoolT)
    if isinstance(pattern, ListT):
        return isinstance(concrete, ListT) and match_type(
            pattern.elem, concrete.elem, bindings
        )
    if isinstance(pattern, PairT):
        return (
            isinstance(concrete, PairT)
            and match_type(pattern.fst, concrete.fst, bindings)
            and match_type(pattern.snd, concrete.snd, bindings)
        )
    if isinstance(pattern, FunT):
        return (
            isinstance(concrete, FunT)
            and match_type(pattern.arg, concrete.arg, bindings)
            and match_type(pattern.ret, concrete.ret, bindings)
        )
    raise TypeError(f"not a Type: {pattern!r}")


def subst_type(t: Type, bindings: dict[int, Type]) -> Type:
    """Replace every TypeVar in t by its binding (must be total)."""
    if isinstance(t, (IntT, BoolT)):
        return t
    if isinstance(t, TypeVar):
        return bindings[t.id]
    if isinstance(t, ListT):
        return ListT(subst_type(t.elem, bindings))
    if isinstance(t, PairT):
        return PairT(subst_type(t.fst, bindings), subst_type(t.snd, bindings))
    if isinstance(t, FunT):
        return FunT(subst_type(t.arg, bindings), subst_type(t.ret, bindings))
    raise TypeError(f"not a Type: {t!r}")


def subterm_types(t: Type) -> set[Type]:
    """t plus every type nested inside it."""
    out = {t}
    if isinstance(t, ListT):
        out |= subterm_types(t.elem)
    elif isinstance(t, PairT):
        out |= subterm_types(t.fst) | subterm_types(t.snd)
    elif isinstance(t, FunT):
        out |= subterm_types(t.arg) | subterm_types(t.ret)
    return out
