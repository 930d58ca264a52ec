"""Properties and property signatures.

A property is a closed program of type ((τin, τout)) -> Bool.  Running
one over a set of input/output pairs and abstracting the observed
booleans through Π gives one position of a signature: AllTrue, AllFalse,
or Mixed.  Signatures computed from finitely many pairs under-approximate
the true signature in the AllTrue/AllFalse ⊑ Mixed lattice.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from hashlib import blake2b
from typing import Iterable, Sequence

from .ast import Expr
from .evalcore import (
    DEFAULT_FUEL,
    compile_expr,
    evaluate_compiled,
    outcomes_compiled,
    property_abstract_compiled,
)
from .parser import parse_expr
from .printer import print_expr
from .specio import IOSpec
from .synth import Budget, Configuration, enumerate_closed
from .typecheck import infer_type
from .types import BOOL, FunT, PairT, Type, parse_type, type_to_str
from .values import Ok


class AbstractValue(enum.IntEnum):
    """Codomain of the Π abstraction over an observed boolean set."""

    ALL_TRUE = 0
    ALL_FALSE = 1
    MIXED = 2


_TO_CHAR = {AbstractValue.ALL_TRUE: "T", AbstractValue.ALL_FALSE: "F",
            AbstractValue.MIXED: "M"}
_FROM_CHAR = {v: k for k, v in _TO_CHAR.items()}

Signature = tuple  # tuple[AbstractValue, ...]


def pi(observed: Iterable[bool]) -> AbstractValue:
    """Π: abstract the set of observed booleans."""
    seen_true = seen_false = False
    for b in observed:
        if b:
            seen_true = True
        else:
            seen_false = True
    if seen_true and seen_false:
        return AbstractValue.MIXED
    if not seen_true and not seen_false:
        raise ValueError("Π is undefined on an empty observation set")
    return AbstractValue.ALL_TRUE if seen_true else AbstractValue.ALL_FALSE


def signature_to_str(sig: Signature) -> str:
    return "".join(_TO_CHAR[v] for v in sig)


def parse_signature(text: str) -> Signature:
    try:
        return tuple(_FROM_CHAR[c] for c in text)
    except KeyError as err:
        raise ValueError(f"bad signature character {err.args[0]!r}") from None


def property_type(tin: Type, tout: Type) -> FunT:
    return FunT(PairT(tin, tout), BOOL)


class EmptySampleError(ValueError):
    """Every sampled input made the program err; no signature exists."""


@dataclass(frozen=True, slots=True)
class Property:
    program: Expr
    text: str
    canonical_length: int

    @classmethod
    def from_program(cls, program: Expr) -> "Property":
        t = infer_type(program)
        if not (isinstance(t, FunT) and isinstance(t.arg, PairT)
                and t.ret == BOOL):
            raise ValueError(
                f"a property must have type ((in, out)) -> Bool, got {type_to_str(t)}"
            )
        text = print_expr(program)
        return cls(program, text, len(text))


@dataclass(frozen=True, slots=True)
class PropertyCatalog:
    task_type: tuple[Type, Type]
    properties: tuple[Property, ...]
    provenance_seed: int

    def __len__(self):
        return len(self.properties)

    def __iter__(self):
        return iter(self.properties)

    def to_dict(self) -> dict:
        tin, tout = self.task_type
        return {
            "input_type": type_to_str(tin),
            "output_type": type_to_str(tout),
            "seed": self.provenance_seed,
            "properties": [p.text for p in self.properties],
        }

    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), separators=(",", ":")).encode()
        return blake2b(blob, digest_size=8).hexdigest()

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def from_dict(cls, doc: dict) -> "PropertyCatalog":
        tin = parse_type(doc["input_type"])
        tout = parse_type(doc["output_type"])
        expected = property_type(tin, tout)
        props = tuple(
            Property.from_program(parse_expr(text, expected))
            for text in doc["properties"]
        )
        for given, p in zip(doc["properties"], props):
            if p.text != given:
                raise ValueError(f"property text is not canonical: {given!r}")
        return cls((tin, tout), props, int(doc.get("seed", 0)))

    @classmethod
    def load(cls, path: str) -> "PropertyCatalog":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@lru_cache(maxsize=32)
def _compiled_properties(catalog: PropertyCatalog) -> tuple:
    return tuple(compile_expr(p.program) for p in catalog.properties)


def eval_property_total(p: Property, pair, fuel: int = DEFAULT_FUEL) -> bool:
    """Run p on one (input, output) pair; errors and timeouts count false."""
    out = evaluate_compiled(compile_expr(p.program), pair, fuel)
    return isinstance(out, Ok) and out.value is True


def estimated_signature(catalog: PropertyCatalog, spec: IOSpec,
                        fuel: int = DEFAULT_FUEL) -> Signature:
    """Position i = Π of property i's totalized outcomes over spec.pairs."""
    tin, tout = catalog.task_type
    if spec.input_type != tin or spec.output_type != tout:
        raise ValueError(
            f"spec type ({type_to_str(spec.input_type)}, "
            f"{type_to_str(spec.output_type)}) does not match catalog task type "
            f"({type_to_str(tin)}, {type_to_str(tout)})"
        )
    return tuple(
        AbstractValue(property_abstract_compiled(code, spec.pairs, fuel))
        for code in _compiled_properties(catalog)
    )


def ok_pairs(program: Expr, inputs, fuel: int = DEFAULT_FUEL) -> list[tuple]:
    """(x, f(x)) for inputs where the program runs clean; errs are skipped."""
    code = compile_expr(program)
    pairs = []
    for x, out in zip(inputs, outcomes_compiled(code, list(inputs), fuel)):
        if isinstance(out, Ok):
            pairs.append((x, out.value))
    return pairs


def program_signature(catalog: PropertyCatalog, program: Expr, inputs,
                      fuel: int = DEFAULT_FUEL) -> Signature:
    """Signature of a program over sampled inputs (erring inputs skipped)."""
    pairs = ok_pairs(program, inputs, fuel)
    if not pairs:
        raise EmptySampleError("program errs on every sampled input")
    return tuple(
        AbstractValue(property_abstract_compiled(code, pairs, fuel))
        for code in _compiled_properties(catalog)
    )


def enumerate_properties(task_type: tuple[Type, Type], config: Configuration,
                         count: int, budget: Budget | None = None) -> list[Property]:
    """First `count` closed property programs, cheapest first.

    Returns fewer if the configuration's space exhausts (or the pop
    budget runs out) first.
    """
    tin, tout = task_type
    root = property_type(tin, tout)
    out = []
    for program, _cost in enumerate_closed(root, config, max_programs=count,
                                           budget=budget):
        out.append(Property.from_program(program))
    return out


def property_column(p: Property, corpus_pairs: Sequence[list],
                    fuel: int = DEFAULT_FUEL) -> tuple:
    """One AbstractValue per corpus program for a single property."""
    code = compile_expr(p.program)
    return tuple(
        AbstractValue(property_abstract_compiled(code, pairs, fuel))
        for pairs in corpus_pairs
    )


def corpus_ok_pairs(corpus, fuel: int = DEFAULT_FUEL) -> list[list]:
    """Clean (x, f(x)) pair lists per corpus entry; all-err programs dropped."""
    out = []
    for program, inputs in corpus:
        pairs = ok_pairs(program, inputs, fuel)
        if pairs:
            out.append(pairs)
    return out


def prune_properties(candidates: Sequence[Property], corpus,
                     fuel: int = DEFAULT_FUEL, *,
                     task_type: tuple[Type, Type] | None = None,
                     seed: int = 0, limit: int | None = None) -> PropertyCatalog:
    """Keep properties that discriminate within the corpus.

    Drops constant columns, keeps one representative per distinct column
    (minimal canonical length, ties by text), and orders survivors by
    descending discrimination (minority-class count), then text.
    """
    if task_type is None:
        if not candidates:
            raise ValueError("cannot infer a task type from zero candidates")
        t = infer_type(candidates[0].program)
        task_type = (t.arg.fst, t.arg.snd)
    pair_lists = corpus_ok_pairs(corpus, fuel)

    by_column: dict[tuple, Property] = {}
    for p in candidates:
        col = property_column(p, pair_lists, fuel)
        if len(set(col)) <= 1:
            continue
        best = by_column.get(col)
        if best is None or (p.canonical_length, p.text) < (best.canonical_length,
                                                           best.text):
            by_column[col] = p

    def minority_count(col: tuple) -> int:
        counts = [col.count(v) for v in AbstractValue]
        return min(c for c in counts if c > 0)

    ordered = sorted(
        by_column.items(),
        key=lambda item: (-minority_count(item[0]), item[1].text),
    )
    survivors = tuple(p for _col, p in ordered)
    if limit is not None:
        survivors = survivors[:limit]
    return PropertyCatalog(task_type, survivors, seed)
