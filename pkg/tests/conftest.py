"""Shared fixtures: tiny configurations, canonical specs, corpus path."""
from __future__ import annotations

import pathlib

import pytest

from propsig import parse_type
from propsig.components import catalog, default_pool_elements
from propsig.specio import IOSpec
from propsig.synth import Configuration

REPO = pathlib.Path(__file__).resolve().parent.parent


def elements_named(*names: str):
    """Pool elements for the given component names, default costs."""
    cat = catalog()
    wanted = set(names)
    els = [e for e in default_pool_elements() if cat[e.component].name in wanted]
    missing = wanted - {cat[e.component].name for e in els}
    assert not missing, f"unknown components: {missing}"
    return els


def config_named(*names: str, max_cost: int | None = None) -> Configuration:
    if max_cost is None:
        return Configuration(elements_named(*names))
    return Configuration(elements_named(*names), max_cost=max_cost)


@pytest.fixture(scope="session")
def corpus_dir() -> pathlib.Path:
    d = REPO / "corpus"
    assert d.is_dir() and list(d.glob("*.json")), "run scripts/make_corpus.py"
    return d


@pytest.fixture
def swap_spec() -> IOSpec:
    t = parse_type("(Int, Int)")
    return IOSpec(t, t, (((1, 2), (2, 1)), ((3, 7), (7, 3))))


@pytest.fixture
def square_spec() -> IOSpec:
    return IOSpec(parse_type("Int"), parse_type("Int"),
                  ((1, 1), (2, 4), (6, 36), (10, 100)))
