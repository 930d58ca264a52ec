"""Task files: JSON round-trip, format validation, spec satisfaction."""
import json

import pytest

from propsig.parser import parse_expr
from propsig.specio import (
    FormatError,
    IOSpec,
    Task,
    load_task,
    satisfies,
    save_task,
    task_from_dict,
    task_to_dict,
)
from propsig.types import BOOL, INT, ListT, PairT, parse_type

SWAP_DOC = {
    "name": "swap",
    "input_type": "(Int, Int)",
    "output_type": "(Int, Int)",
    "pairs": [["(1, 2)", "(2, 1)"], ["(3, 7)", "(7, 3)"]],
    "held_out_pairs": [["(0, -4)", "(-4, 0)"]],
}


def test_task_from_dict_parses_literals():
    task = task_from_dict(SWAP_DOC)
    assert task.name == "swap"
    assert task.spec.input_type == PairT(INT, INT)
    assert task.spec.pairs == (((1, 2), (2, 1)), ((3, 7), (7, 3)))
    assert task.held_out_pairs == (((0, -4), (-4, 0)),)


def test_task_round_trip_through_file(tmp_path):
    task = task_from_dict(SWAP_DOC)
    path = str(tmp_path / "swap.json")
    save_task(task, path)
    assert load_task(path) == task
    # the on-disk form keeps literal strings, so it stays hand-editable
    doc = json.loads((tmp_path / "swap.json").read_text())
    assert doc["pairs"][0] == ["(1, 2)", "(2, 1)"]


def test_held_out_pairs_default_to_empty():
    doc = {k: v for k, v in SWAP_DOC.items() if k != "held_out_pairs"}
    assert task_from_dict(doc).held_out_pairs == ()


@pytest.mark.parametrize("mutate,fragment", [
    (lambda d: d.pop("name"), "missing field"),
    (lambda d: d.pop("pairs"), "missing field"),
    (lambda d: d.update(name=""), "non-empty"),
    (lambda d: d.update(input_type="List<"), "type"),
    (lambda d: d.update(pairs=[]), "non-empty"),
    (lambda d: d.update(pairs=[["(1, 2)"]]), "two-element"),
    (lambda d: d.update(pairs=[[12, 21]]), "literal strings"),
    (lambda d: d.update(pairs=[["(1, 2)", "7"]]), "pairs[0]"),
    (lambda d: d.update(pairs="(1, 2)"), "list"),
])
def test_malformed_documents_rejected(mutate, fragment):
    doc = json.loads(json.dumps(SWAP_DOC))
    mutate(doc)
    with pytest.raises(FormatError) as exc:
        task_from_dict(doc)
    assert fragment.lower() in str(exc.value).lower()


def test_load_task_wraps_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(FormatError, match="broken.json"):
        load_task(str(path))


def test_iospec_checks_value_types():
    with pytest.raises(FormatError):
        IOSpec(INT, INT, (((1, 2), 3),))
    with pytest.raises(FormatError):
        IOSpec(ListT(INT), BOOL, (([1], 0),))


def test_task_to_dict_renders_values():
    task = task_from_dict(SWAP_DOC)
    doc = task_to_dict(task)
    assert doc == SWAP_DOC


def test_satisfies_exact_match_only():
    spec = IOSpec(INT, INT, ((2, 4), (5, 10)))
    double = parse_expr("\\(x:Int) { mul(x, 2) }")
    square = parse_expr("\\(x:Int) { mul(x, x) }")
    assert satisfies(double, spec)
    assert not satisfies(square, spec)


def test_satisfies_treats_errors_as_failure():
    spec = IOSpec(INT, INT, ((0, 0),))
    divider = parse_expr("\\(x:Int) { div(x, x) }")
    assert not satisfies(divider, spec)
    # fuel exhaustion is a plain "no", not an exception
    ident = parse_expr("\\(x:Int) { add(x, 0) }")
    assert satisfies(ident, spec)
    assert not satisfies(ident, spec, fuel=1)


def test_task_type_shorthand():
    doc = dict(SWAP_DOC, input_type="List<Bool>", output_type="Int",
               pairs=[["[true, false]", "1"]], held_out_pairs=[])
    task = task_from_dict(doc)
    assert task.spec.input_type == parse_type("List<Bool>")
    assert task.spec.pairs == (([True, False], 1),)
