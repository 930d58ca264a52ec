"""Benchmark harness and the trained-artifact bundle it consumes.

A model bundle holds, per task type, a pruned property catalog and a
trained premise selector, plus the global component-usage totals that
drive baseline sampling.  The benchmark sweeps a task directory,
drawing guided configurations when a bundle is given and baseline
(appearance-rate) configurations otherwise, and emits results.csv,
cumulative.csv, and manifest.json.
"""

from __future__ import annotations

import csv
import json
import os
import re
import time
from dataclasses import dataclass
from hashlib import blake2b

import numpy as np

from .components import PoolElement, catalog
from .datagen import (
    build_premise_dataset,
    generate_programs,
    sample_configuration,
    sample_inputs,
)
from .evalcore import DEFAULT_FUEL
from .learn import (
    WEIGHT_FLOOR,
    PremiseModel,
    TrainSettings,
    forward_premise,
    load_premise_model,
    sample_baseline_config,
    save_premise_model,
    train_premise,
)
from .props import (
    Property,
    PropertyCatalog,
    estimated_signature,
    enumerate_properties,
    prune_properties,
)
from .specio import Task, load_task
from .synth import Budget, Configuration, Solved, run_portfolio
from .types import FunT, Type, type_to_str

DEFAULT_BUDGET_SECS = 60.0
DEFAULT_CONFIGS_PER_TASK = 16
DEFAULT_K = 10
DEFAULT_POPS_PER_CONFIG = 9_000
DEFAULT_PROP_LIMIT = 256
DEFAULT_PER_TYPE_LIMIT = 1600
DEFAULT_GENERATION_ROUNDS = 240


def mix_seed(*parts) -> int:
    """Stable 63-bit substream seed from any printable parts."""
    blob = ":".join(str(p) for p in parts).encode()
    return int.from_bytes(blake2b(blob, digest_size=8).digest(), "big") >> 1


def _slug(tin: Type, tout: Type) -> str:
    text = f"{type_to_str(tin)}__to__{type_to_str(tout)}"
    return re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_")


@dataclass
class BundleEntry:
    props: PropertyCatalog
    model: PremiseModel


@dataclass
class ModelBundle:
    entries: dict  # (Type, Type) -> BundleEntry
    counts: np.ndarray  # per-component training totals

    def lookup(self, tin: Type, tout: Type) -> BundleEntry | None:
        return self.entries.get((tin, tout))

    def save(self, path: str) -> None:
        os.makedirs(path, exist_ok=True)
        types_meta = {}
        for (tin, tout), entry in sorted(
            self.entries.items(), key=lambda kv: _slug(kv[0][0], kv[0][1])
        ):
            slug = _slug(tin, tout)
            tdir = os.path.join(path, "types", slug)
            os.makedirs(tdir, exist_ok=True)
            entry.props.save(os.path.join(tdir, "props.json"))
            save_premise_model(entry.model, os.path.join(tdir, "premise.npz"))
            types_meta[slug] = {
                "input_type": type_to_str(tin),
                "output_type": type_to_str(tout),
            }
        meta = {
            "catalog_hash": catalog().hash(),
            "counts": [int(c) for c in self.counts],
            "types": types_meta,
        }
        with open(os.path.join(path, "meta.json"), "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "ModelBundle":
        with open(os.path.join(path, "meta.json"), encoding="utf-8") as fh:
            meta = json.load(fh)
        if meta["catalog_hash"] != catalog().hash():
            raise ValueError("bundle was built against a different component catalog")
        entries = {}
        for slug in meta["types"]:
            tdir = os.path.join(path, "types", slug)
            props = PropertyCatalog.load(os.path.join(tdir, "props.json"))
            model = load_premise_model(os.path.join(tdir, "premise.npz"), props)
            entries[props.task_type] = BundleEntry(props, model)
        counts = np.array(meta["counts"], dtype=np.float64)
        return cls(entries, counts)


# -- property catalog construction -----------------------------------------

# Focused pools for property enumeration.  The main pool reaches the
# comparison/membership shapes; the aggregate pool adds extremum and
# endpoint views; the pinpoint pool is tiny so that the deepest
# membership property (cost 10) is always reached before any cap.
_PROP_POOLS: tuple[tuple[tuple[str, ...], int, int], ...] = (
    (("fst", "snd", "eq", "neq", "lt", "leq", "gt", "geq", "is_even",
      "not", "len", "sum", "for_all", "exists", "contains"), 3000, 400_000),
    (("fst", "snd", "eq", "neq", "leq", "geq", "head", "last", "maximum",
      "minimum", "sum", "len", "zero", "one", "not"), 1500, 250_000),
    (("fst", "snd", "for_all", "exists", "contains"), 300, 60_000),
)
_PROP_MAX_COST = 10


def property_configs() -> list[tuple[Configuration, int, int]]:
    """(configuration, candidate cap, pop cap) triples for property enumeration."""
    cat = catalog()
    out = []
    for names, count, pops in _PROP_POOLS:
        elements = tuple(PoolElement(cat.by_name[n].cid, cat.by_name[n].cost)
                         for n in names)
        config = Configuration(elements, max_cost=_PROP_MAX_COST)
        out.append((config, count, pops))
    return out


def property_candidates(task_type: tuple[Type, Type]) -> list[Property]:
    """Deduplicated union of the focused enumerations, cheapest first."""
    seen: dict[str, Property] = {}
    for config, count, pops in property_configs():
        for p in enumerate_properties(task_type, config, count,
                                      budget=Budget(max_pops=pops)):
            if p.text not in seen:
                seen[p.text] = p
    return list(seen.values())


def build_property_catalog(task_type: tuple[Type, Type], corpus, seed: int,
                           limit: int = DEFAULT_PROP_LIMIT,
                           fuel: int = DEFAULT_FUEL) -> PropertyCatalog:
    candidates = property_candidates(task_type)
    return prune_properties(candidates, corpus, fuel, task_type=task_type,
                            seed=seed, limit=limit)


# -- bundle training ---------------------------------------------------------

def build_model_bundle(task_types, seed: int, *,
                       per_type_limit: int = DEFAULT_PER_TYPE_LIMIT,
                       prop_limit: int = DEFAULT_PROP_LIMIT,
                       corpus_inputs: int = 64,
                       generation_rounds: int = DEFAULT_GENERATION_ROUNDS,
                       settings: TrainSettings | None = None,
                       fuel: int = DEFAULT_FUEL,
                       progress=None) -> ModelBundle:
    """Generate programs, learn property catalogs, and train premise
    selectors for every requested task type."""
    if settings is None:
        settings = TrainSettings(seed=mix_seed(seed, "train"))
    entries: dict = {}
    counts = np.zeros(len(catalog()), dtype=np.float64)
    for task_type in task_types:
        if not isinstance(task_type, FunT):
            raise ValueError("task types must be function types")
        tin, tout = task_type.arg, task_type.ret
        if progress:
            progress(f"[{type_to_str(tin)} -> {type_to_str(tout)}] generating programs")
        gen_seeds = [mix_seed(seed, "gen", type_to_str(task_type), r)
                     for r in range(generation_rounds)]
        generated = generate_programs(task_type, per_type_limit, gen_seeds,
                                      fuel=fuel)
        programs = [p for p, _ in generated]
        inputs = sample_inputs(tin, corpus_inputs,
                               mix_seed(seed, "corpus", type_to_str(task_type)))
        corpus = [(p, inputs) for p in programs]
        if progress:
            progress(f"  {len(programs)} programs; building property catalog")
        props = build_property_catalog((tin, tout), corpus,
                                       mix_seed(seed, "props"), prop_limit, fuel)
        if len(props) == 0:
            raise RuntimeError(
                f"no discriminating properties for {type_to_str(task_type)}"
            )
        if progress:
            progress(f"  {len(props)} properties; building dataset")
        dataset, skipped = build_premise_dataset(programs, props,
                                                 mix_seed(seed, "dataset"), fuel)
        if not dataset:
            raise RuntimeError(f"no usable programs for {type_to_str(task_type)}")
        for ex in dataset:
            counts += np.array(ex.counts, dtype=np.float64)
        if progress:
            progress(f"  {len(dataset)} examples ({skipped} skipped); training")
        model, _curve = train_premise(dataset, settings, props)
        entries[(tin, tout)] = BundleEntry(props, model)
    return ModelBundle(entries, counts)


# -- the benchmark sweep ------------------------------------------------------

@dataclass
class BenchReport:
    rows: list  # dicts with task,name,solved,elapsed_ms,pops,config_id
    cumulative: list  # (elapsed_s, cumulative_solved)
    manifest: dict

    @property
    def solved_count(self) -> int:
        return sum(1 for r in self.rows if r["solved"])

    def write(self, out_dir: str) -> None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "results.csv"), "w", newline="",
                  encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["task", "name", "solved", "elapsed_ms", "pops",
                        "config_id"])
            for r in self.rows:
                w.writerow([r["task"], r["name"], int(r["solved"]),
                            f"{r['elapsed_ms']:.1f}", r["pops"], r["config_id"]])
        with open(os.path.join(out_dir, "cumulative.csv"), "w", newline="",
                  encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["elapsed_s", "cumulative_solved"])
            for elapsed_s, solved in self.cumulative:
                w.writerow([f"{elapsed_s:.3f}", solved])
        with open(os.path.join(out_dir, "manifest.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(self.manifest, fh, indent=2)
            fh.write("\n")


def _list_task_files(task_dir: str) -> list[str]:
    names = sorted(n for n in os.listdir(task_dir) if n.endswith(".json"))
    return [os.path.join(task_dir, n) for n in names]


def _promising_first(configs: list[Configuration], weights) -> list[Configuration]:
    """Stable-sort configurations by total sampled weight, heaviest first.

    The portfolio runs sequentially, so spending the budget on the draws
    the sampler itself considered most likely is free: it reorders work,
    never changes which configurations run.
    """
    def mass(cfg: Configuration) -> float:
        return float(sum(weights[e.component] for e in cfg.elements))

    return sorted(configs, key=mass, reverse=True)


def task_configurations(task: Task, bundle: ModelBundle | None,
                        configs_per_task: int, k: int, seed: int,
                        fuel: int = DEFAULT_FUEL) -> tuple[list[Configuration], str]:
    """Draw this task's configurations; guided when the bundle covers its type."""
    spec = task.spec
    entry = bundle.lookup(spec.input_type, spec.output_type) if bundle else None
    configs = []
    if entry is not None:
        sig = estimated_signature(entry.props, spec, fuel)
        # one forward pass; the per-config draws reuse the same weights
        weights = np.maximum(forward_premise(entry.model, sig), WEIGHT_FLOOR)
        for c in range(configs_per_task):
            configs.append(sample_configuration(
                weights, k, mix_seed(seed, task.name, c), fuel=fuel))
        return _promising_first(configs, weights), "guided"
    if bundle is not None:
        counts = bundle.counts
    else:
        counts = np.ones(len(catalog()), dtype=np.float64)
    for c in range(configs_per_task):
        configs.append(sample_baseline_config(
            counts, k, mix_seed(seed, task.name, c), fuel=fuel))
    rates = counts / counts.sum() if counts.sum() > 0 else counts
    return _promising_first(configs, np.maximum(rates, WEIGHT_FLOOR)), "baseline"


def run_benchmark(task_dir: str, out_dir: str | None = None,
                  bundle: ModelBundle | None = None,
                  baseline_counts=None,
                  budget_secs: float = DEFAULT_BUDGET_SECS,
                  configs_per_task: int = DEFAULT_CONFIGS_PER_TASK,
                  k: int = DEFAULT_K,
                  parallelism: int = 1,
                  seed: int = 0,
                  pops_per_config: int = DEFAULT_POPS_PER_CONFIG,
                  fuel: int = DEFAULT_FUEL,
                  progress=None) -> BenchReport:
    """Sweep every task file in task_dir; never aborts on one task.

    With a bundle, tasks of covered types run guided; `baseline_counts`
    forces baseline sampling from the given totals even when a bundle is
    present (the guided-vs-baseline experiment uses the same bundle's
    training totals for its baseline arm).
    """
    paths = _list_task_files(task_dir)
    rows = []
    cumulative: list[tuple[float, int]] = []
    solved_total = 0
    sweep_elapsed = 0.0
    budget = Budget(max_pops=pops_per_config,
                    wall_clock=budget_secs / max(1, configs_per_task))
    for path in paths:
        stem = os.path.splitext(os.path.basename(path))[0]
        t0 = time.perf_counter()
        try:
            task = load_task(path)
            if baseline_counts is not None:
                configs = [
                    sample_baseline_config(baseline_counts, k,
                                           mix_seed(seed, task.name, c), fuel=fuel)
                    for c in range(configs_per_task)
                ]
                totals = np.asarray(baseline_counts, dtype=np.float64)
                rates = totals / totals.sum() if totals.sum() > 0 else totals
                configs = _promising_first(configs, np.maximum(rates, WEIGHT_FLOOR))
                mode = "baseline"
            else:
                configs, mode = task_configurations(task, bundle,
                                                    configs_per_task, k, seed, fuel)
            result, stats = run_portfolio(task.spec, configs, budget, parallelism)
            elapsed_ms = (time.perf_counter() - t0) * 1000.0
            solved = isinstance(result, Solved)
            pops = sum(s.pops for s in stats)
            config_id = next((s.config_index for s in stats if s.kind == "solved"),
                             -1)
            rows.append({
                "task": stem, "name": task.name, "solved": solved,
                "elapsed_ms": elapsed_ms, "pops": pops, "config_id": config_id,
                "mode": mode,
                "program": None if not solved else result.program,
            })
        except Exception as err:  # a bad task file must not sink the sweep
            elapsed_ms = (time.perf_counter() - t0) * 1000.0
            rows.append({
                "task": stem, "name": stem, "solved": False,
                "elapsed_ms": elapsed_ms, "pops": 0, "config_id": -1,
                "mode": "error", "program": None, "error": str(err),
            })
            solved = False
        sweep_elapsed += elapsed_ms / 1000.0
        if solved:
            solved_total += 1
            cumulative.append((sweep_elapsed, solved_total))
        if progress:
            mark = "solved" if solved else "-"
            progress(f"  {stem}: {mark} ({elapsed_ms:.0f} ms)")
    cumulative.append((sweep_elapsed, solved_total))
    manifest = {
        "command": "run_benchmark",
        "task_dir": os.path.abspath(task_dir),
        "out_dir": os.path.abspath(out_dir) if out_dir else None,
        "seed": seed,
        "catalog_hash": catalog().hash(),
        "budget_secs": budget_secs,
        "configs_per_task": configs_per_task,
        "k": k,
        "parallelism": parallelism,
        "pops_per_config": pops_per_config,
        "fuel": fuel,
        "mode": "baseline" if baseline_counts is not None
                else ("guided" if bundle else "uniform-baseline"),
        "tasks": [os.path.basename(p) for p in paths],
    }
    report = BenchReport(rows, cumulative, manifest)
    if out_dir:
        report.write(out_dir)
    return report
