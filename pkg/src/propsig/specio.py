"""Input/output specifications and task files.

A task is a named synthesis problem: an input type, an output type, and
two pair lists (training pairs drive the search; held-out pairs are for
scoring only).  Task files are JSON with values written in the same
literal syntax the expression language uses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .evalcore import DEFAULT_FUEL, compile_expr, check_pairs_compiled
from .types import Type, parse_type, type_to_str
from .values import parse_value, value_has_type, value_to_str


class FormatError(ValueError):
    """A task file that does not follow the expected shape."""


@dataclass(frozen=True, slots=True)
class IOSpec:
    input_type: Type
    output_type: Type
    pairs: tuple[tuple[Any, Any], ...]

    def __post_init__(self) -> None:
        for x, y in self.pairs:
            if not value_has_type(x, self.input_type):
                raise FormatError(f"input {value_to_str(x)} is not a "
                                  f"{type_to_str(self.input_type)}")
            if not value_has_type(y, self.output_type):
                raise FormatError(f"output {value_to_str(y)} is not a "
                                  f"{type_to_str(self.output_type)}")


@dataclass(frozen=True, slots=True)
class Task:
    name: str
    spec: IOSpec
    held_out_pairs: tuple[tuple[Any, Any], ...]


def _parse_pairs(raw: Any, tin: Type, tout: Type, where: str) -> tuple:
    if not isinstance(raw, list):
        raise FormatError(f"{where} must be a list of [input, output] pairs")
    out = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, list) or len(entry) != 2:
            raise FormatError(f"{where}[{i}] must be a two-element list")
        a, b = entry
        if not isinstance(a, str) or not isinstance(b, str):
            raise FormatError(f"{where}[{i}] values must be literal strings")
        try:
            out.append((parse_value(a, tin), parse_value(b, tout)))
        except ValueError as err:
            raise FormatError(f"{where}[{i}]: {err}") from err
    return tuple(out)


def task_from_dict(doc: Any) -> Task:
    if not isinstance(doc, dict):
        raise FormatError("task document must be a JSON object")
    for key in ("name", "input_type", "output_type", "pairs"):
        if key not in doc:
            raise FormatError(f"missing field {key!r}")
    if not isinstance(doc["name"], str) or not doc["name"]:
        raise FormatError("name must be a non-empty string")
    try:
        tin = parse_type(doc["input_type"])
        tout = parse_type(doc["output_type"])
    except ValueError as err:
        raise FormatError(str(err)) from err
    pairs = _parse_pairs(doc["pairs"], tin, tout, "pairs")
    if not pairs:
        raise FormatError("pairs must be non-empty")
    held = _parse_pairs(doc.get("held_out_pairs", []), tin, tout,
                        "held_out_pairs")
    return Task(doc["name"], IOSpec(tin, tout, pairs), held)


def task_to_dict(task: Task) -> dict:
    def render(pairs):
        return [[value_to_str(x), value_to_str(y)] for x, y in pairs]

    return {
        "name": task.name,
        "input_type": type_to_str(task.spec.input_type),
        "output_type": type_to_str(task.spec.output_type),
        "pairs": render(task.spec.pairs),
        "held_out_pairs": render(task.held_out_pairs),
    }


def load_task(path: str) -> Task:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise FormatError(f"{path}: {err}") from err
    return task_from_dict(doc)


def save_task(task: Task, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(task_to_dict(task), fh, indent=2)
        fh.write("\n")


def satisfies(program, spec: IOSpec, fuel: int = DEFAULT_FUEL) -> bool:
    """True iff the program maps every spec input to the expected output.

    Any runtime error or fuel exhaustion counts as not satisfying.
    """
    return check_pairs_compiled(compile_expr(program), spec.pairs, fuel)
