"""The fixed component catalog and pool-element instantiation.

Each component is a typed library function with a cost.  Literal
components (zero, nil, ...) and the pair components (mk_pair, fst, snd)
expand into dedicated AST nodes rather than Apply nodes; everything else
becomes Apply and is executed by the evaluator kernels, which dispatch
on the component id.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from .ast import (
    Apply,
    BoolLit,
    Expr,
    Fst,
    Hole,
    IntLit,
    MkPair,
    NilLit,
    Snd,
)
from .types import (
    BOOL,
    INT,
    ListT,
    PairT,
    Type,
    is_ground,
    match_type,
    parse_type,
    subst_type,
    subterm_types,
    type_to_str,
)


@dataclass(frozen=True, slots=True)
class Scheme:
    params: tuple[Type, ...]
    ret: Type
    n_vars: int

    def __str__(self):
        inside = ", ".join(type_to_str(p) for p in self.params)
        return f"({inside}) -> {type_to_str(self.ret)}"


@dataclass(frozen=True, slots=True)
class Component:
    cid: int
    name: str
    scheme: Scheme
    cost: int

    @property
    def arity(self) -> int:
        return len(self.scheme.params)


@dataclass(frozen=True, slots=True)
class PoolElement:
    component: int  # component id
    cost: int

    def __post_init__(self):
        if self.cost < 1:
            raise ValueError("pool element cost must be >= 1")


# (name, param type texts, return type text, cost); higher-order entries cost 2
_TABLE = [
    ("add", ("Int", "Int"), "Int", 1),
    ("sub", ("Int", "Int"), "Int", 1),
    ("mul", ("Int", "Int"), "Int", 1),
    ("div", ("Int", "Int"), "Int", 1),
    ("mod", ("Int", "Int"), "Int", 1),
    ("neg", ("Int",), "Int", 1),
    ("abs", ("Int",), "Int", 1),
    ("min", ("Int", "Int"), "Int", 1),
    ("max", ("Int", "Int"), "Int", 1),
    ("is_even", ("Int",), "Bool", 1),
    ("eq", ("Int", "Int"), "Bool", 1),
    ("neq", ("Int", "Int"), "Bool", 1),
    ("lt", ("Int", "Int"), "Bool", 1),
    ("leq", ("Int", "Int"), "Bool", 1),
    ("gt", ("Int", "Int"), "Bool", 1),
    ("geq", ("Int", "Int"), "Bool", 1),
    ("and", ("Bool", "Bool"), "Bool", 1),
    ("or", ("Bool", "Bool"), "Bool", 1),
    ("not", ("Bool",), "Bool", 1),
    ("zero", (), "Int", 1),
    ("one", (), "Int", 1),
    ("two", (), "Int", 1),
    ("neg_one", (), "Int", 1),
    ("true", (), "Bool", 1),
    ("false", (), "Bool", 1),
    ("nil", (), "List<a>", 1),
    ("mk_pair", ("a", "b"), "(a, b)", 1),
    ("fst", ("(a, b)",), "a", 1),
    ("snd", ("(a, b)",), "b", 1),
    ("cons", ("a", "List<a>"), "List<a>", 1),
    ("head", ("List<a>",), "a", 1),
    ("tail", ("List<a>",), "List<a>", 1),
    ("last", ("List<a>",), "a", 1),
    ("len", ("List<a>",), "Int", 1),
    ("reverse", ("List<a>",), "List<a>", 1),
    ("concat", ("List<a>", "List<a>"), "List<a>", 1),
    ("take", ("List<a>", "Int"), "List<a>", 1),
    ("drop", ("List<a>", "Int"), "List<a>", 1),
    ("index", ("List<a>", "Int"), "a", 1),
    ("contains", ("List<a>", "a"), "Bool", 1),
    ("count", ("List<a>", "a"), "Int", 1),
    ("sum", ("List<Int>",), "Int", 1),
    ("product", ("List<Int>",), "Int", 1),
    ("maximum", ("List<Int>",), "Int", 1),
    ("minimum", ("List<Int>",), "Int", 1),
    ("sort", ("List<Int>",), "List<Int>", 1),
    ("distinct", ("List<a>",), "List<a>", 1),
    ("range", ("Int", "Int"), "List<Int>", 1),
    ("replicate", ("Int", "a"), "List<a>", 1),
    ("map", ("List<a>", "a -> b"), "List<b>", 2),
    ("filter", ("List<a>", "a -> Bool"), "List<a>", 2),
    ("foldl", ("List<a>", "b", "(b, a) -> b"), "b", 2),
    ("foldr", ("List<a>", "b", "(a, b) -> b"), "b", 2),
    ("zip_with", ("List<a>", "List<b>", "(a, b) -> c"), "List<c>", 2),
    ("for_all", ("List<a>", "a -> Bool"), "Bool", 2),
    ("exists", ("List<a>", "a -> Bool"), "Bool", 2),
    ("find_index", ("List<a>", "a -> Bool"), "Int", 2),
]

LITERAL_EXPANSIONS = {
    "zero": lambda ta: IntLit(0),
    "one": lambda ta: IntLit(1),
    "two": lambda ta: IntLit(2),
    "neg_one": lambda ta: IntLit(-1),
    "true": lambda ta: BoolLit(True),
    "false": lambda ta: BoolLit(False),
    "nil": lambda ta: NilLit(ta[0]),
}

STRUCTURAL_COMPONENTS = ("mk_pair", "fst", "snd")


def _count_vars(types_: tuple[Type, ...]) -> int:
    from .types import TypeVar

    top = -1
    stack = list(types_)
    while stack:
        t = stack.pop()
        if isinstance(t, TypeVar):
            top = max(top, t.id)
        else:
            stack.extend(subterm_types(t) - {t})
    return top + 1


class Catalog:
    """Immutable, order-stable component list with name/id indexes."""

    def __init__(self, components: list[Component]):
        self.components = tuple(components)
        self.by_name = {c.name: c for c in self.components}
        if len(self.by_name) != len(self.components):
            raise ValueError("component names must be unique")

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, cid: int) -> Component:
        return self.components[cid]

    def dump(self) -> list[dict]:
        return [
            {"name": c.name, "scheme": str(c.scheme), "cost": c.cost}
            for c in self.components
        ]

    def hash(self) -> str:
        blob = json.dumps(self.dump(), separators=(",", ":")).encode()
        return hashlib.blake2b(blob, digest_size=8).hexdigest()


@lru_cache(maxsize=1)
def catalog() -> Catalog:
    comps = []
    for cid, (name, params_text, ret_text, cost) in enumerate(_TABLE):
        params = tuple(parse_type(p) for p in params_text)
        ret = parse_type(ret_text)
        comps.append(
            Component(cid, name, Scheme(params, ret, _count_vars(params + (ret,))), cost)
        )
    return Catalog(comps)


def default_pool_elements() -> tuple[PoolElement, ...]:
    return tuple(PoolElement(c.cid, c.cost) for c in catalog())


BASE_GROUND_TYPES = (
    INT,
    BOOL,
    ListT(INT),
    ListT(BOOL),
    PairT(INT, INT),
    PairT(ListT(INT), ListT(INT)),
)


def ground_universe(tin: Type, tout: Type) -> tuple[Type, ...]:
    """Instantiation universe: the base set plus all subterms of the task type."""
    universe = set(BASE_GROUND_TYPES) | subterm_types(tin) | subterm_types(tout)
    universe = {t for t in universe if is_ground(t)}
    return tuple(sorted(universe, key=type_to_str))


def instantiations(
    elem: PoolElement, hole_type: Type, ground_types: tuple[Type, ...]
) -> list[tuple[tuple[Type, ...], tuple[Type, ...]]]:
    """All ways to apply elem's component so its return type equals hole_type.

    Each result is (type_args, argument hole types); type_args are indexed
    by scheme variable id.  Every type argument must come from ground_types:
    TypeVars not fixed by the return type range over it in canonical text
    order, and bindings the return type forces outside it are rejected —
    this keeps the reachable hole-type space finite.
    """
    comp = catalog()[elem.component]
    scheme = comp.scheme
    bindings: dict[int, Type] = {}
    if not match_type(scheme.ret, hole_type, bindings):
        return []
    allowed = set(ground_types)
    if any(b not in allowed for b in bindings.values()):
        return []
    free = [v for v in range(scheme.n_vars) if v not in bindings]
    out = []
    for combo in itertools.product(ground_types, repeat=len(free)):
        full = dict(bindings)
        full.update(zip(free, combo))
        type_args = tuple(full[v] for v in range(scheme.n_vars))
        arg_types = tuple(subst_type(p, full) for p in scheme.params)
        out.append((type_args, arg_types))
    return out


def build_expansion(
    comp: Component, type_args: tuple[Type, ...], arg_types: tuple[Type, ...]
) -> Expr:
    """The expression fragment (with fresh holes) a pool element rewrites to."""
    lit = LITERAL_EXPANSIONS.get(comp.name)
    if lit is not None:
        return lit(type_args)
    if comp.name == "mk_pair":
        return MkPair(Hole(arg_types[0]), Hole(arg_types[1]))
    if comp.name == "fst":
        return Fst(Hole(arg_types[0]))
    if comp.name == "snd":
        return Snd(Hole(arg_types[0]))
    return Apply(comp.name, type_args, tuple(Hole(t) for t in arg_types))


def component_counts(e: Expr) -> list[int]:
    """Per-component usage counts for one program.

    Apply nodes count toward their component; literal nodes count toward
    the literal component they expand from (only the 0/1/2/-1 integer
    literals have one); pair/projection nodes count toward mk_pair/fst/snd.
    """
    from .ast import K_APPLY, K_BOOL, K_FST, K_INT, K_MKPAIR, K_NIL, K_SND, walk

    cat = catalog()
    counts = [0] * len(cat)
    int_lits = {0: "zero", 1: "one", 2: "two", -1: "neg_one"}
    for node in walk(e):
        k = node.KIND
        name = None
        if k == K_APPLY:
            name = node.component
        elif k == K_INT:
            name = int_lits.get(node.value)
        elif k == K_BOOL:
            name = "true" if node.value else "false"
        elif k == K_NIL:
            name = "nil"
        elif k == K_MKPAIR:
            name = "mk_pair"
        elif k == K_FST:
            name = "fst"
        elif k == K_SND:
            name = "snd"
        if name is not None:
            counts[cat.by_name[name].cid] += 1
    return counts
