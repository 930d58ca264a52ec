"""Command-line entry points wiring the full pipeline.

Every file-writing command drops a manifest.json next to its outputs so
a run can be reproduced exactly from the recorded seed and arguments.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import bench
from .bench import ModelBundle, build_model_bundle, run_benchmark
from .components import catalog, default_pool_elements
from .datagen import (
    TASK_TYPES,
    build_composition_dataset,
    build_premise_dataset,
    generate_programs,
    load_composition_dataset,
    load_premise_dataset,
    sample_inputs,
    save_composition_dataset,
    save_premise_dataset,
    type_seed,
)
from .evalcore import DEFAULT_FUEL
from .learn import (
    TrainSettings,
    save_composition_model,
    save_premise_model,
    train_composition,
    train_premise,
)
from .parser import parse_expr
from .printer import print_expr
from .props import PropertyCatalog, estimated_signature, signature_to_str
from .specio import load_task
from .synth import (
    Budget,
    BudgetExceeded,
    Configuration,
    Exhausted,
    Solved,
    run_portfolio,
)
from .types import parse_type, type_to_str


def _write_manifest(out_dir: str, command: str, seed, **extra) -> None:
    os.makedirs(out_dir, exist_ok=True)
    manifest = {
        "command": command,
        "argv": sys.argv[1:],
        "seed": seed,
        "catalog_hash": catalog().hash(),
        "out_dir": os.path.abspath(out_dir),
    }
    manifest.update(extra)
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _read_manifest(path: str) -> dict:
    with open(os.path.join(path, "manifest.json"), encoding="utf-8") as fh:
        return json.load(fh)


def _parse_task_type(text: str):
    t = parse_type(text)
    from .types import FunT

    if not isinstance(t, FunT):
        raise click.BadParameter(f"not a function type: {text}")
    return t


@click.group()
@click.version_option(package_name="propsig")
def main() -> None:
    """Property-signature-guided program synthesis toolkit."""


# -- benchmark ---------------------------------------------------------------

@main.command("run-benchmark")
@click.option("--tasks", "task_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--model", "model_dir", default=None,
              type=click.Path(exists=True, file_okay=False),
              help="Model bundle directory; omit for uniform baseline.")
@click.option("--baseline", is_flag=True,
              help="With --model: sample from its training frequencies "
                   "instead of the premise predictions.")
@click.option("--budget-secs", default=bench.DEFAULT_BUDGET_SECS,
              show_default=True)
@click.option("--configs", "configs_per_task",
              default=bench.DEFAULT_CONFIGS_PER_TASK, show_default=True)
@click.option("--k", default=bench.DEFAULT_K, show_default=True)
@click.option("--pops", "pops_per_config",
              default=bench.DEFAULT_POPS_PER_CONFIG, show_default=True,
              help="Pop budget per configuration.")
@click.option("--parallelism", default=1, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def run_benchmark_cmd(task_dir, model_dir, baseline, budget_secs,
                      configs_per_task, k, pops_per_config, parallelism,
                      seed, out_dir):
    """Sweep a task directory; write results.csv / cumulative.csv."""
    bundle = ModelBundle.load(model_dir) if model_dir else None
    baseline_counts = bundle.counts if (bundle is not None and baseline) else None
    report = run_benchmark(
        task_dir, out_dir=None, bundle=bundle, baseline_counts=baseline_counts,
        budget_secs=budget_secs, configs_per_task=configs_per_task, k=k,
        parallelism=parallelism, seed=seed, pops_per_config=pops_per_config,
        progress=click.echo,
    )
    report.manifest["argv"] = sys.argv[1:]
    report.manifest["model"] = os.path.abspath(model_dir) if model_dir else None
    report.write(out_dir)
    click.echo(f"solved {report.solved_count}/{len(report.rows)} tasks")


@main.command("train-bundle")
@click.option("--types", "type_texts", multiple=True,
              help="Task type, repeatable; default: all built-in task types.")
@click.option("--limit", "per_type_limit", default=bench.DEFAULT_PER_TYPE_LIMIT,
              show_default=True, help="Programs per task type.")
@click.option("--prop-limit", default=bench.DEFAULT_PROP_LIMIT, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def train_bundle_cmd(type_texts, per_type_limit, prop_limit, seed, out_dir):
    """Full pipeline: programs, properties, premise models, one bundle."""
    if type_texts:
        types_ = [_parse_task_type(t) for t in type_texts]
    else:
        types_ = list(TASK_TYPES)
    bundle = build_model_bundle(types_, seed, per_type_limit=per_type_limit,
                                prop_limit=prop_limit, progress=click.echo)
    bundle.save(out_dir)
    _write_manifest(out_dir, "train-bundle", seed,
                    types=[type_to_str(t) for t in types_],
                    per_type_limit=per_type_limit, prop_limit=prop_limit)
    click.echo(f"bundle with {len(bundle.entries)} task types -> {out_dir}")


# -- pipeline steps ----------------------------------------------------------

@main.command("gen-programs")
@click.option("--type", "type_text", required=True,
              help='Task type, e.g. "(List<Int>) -> List<Int>".')
@click.option("--count", default=bench.DEFAULT_PER_TYPE_LIMIT, show_default=True)
@click.option("--rounds", default=120, show_default=True,
              help="Configuration draws to try before stopping.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def gen_programs_cmd(type_text, count, rounds, seed, out_dir):
    """Sample observationally-distinct programs of one task type."""
    task_type = _parse_task_type(type_text)
    seeds = [bench.mix_seed(seed, "gen", type_to_str(task_type), r)
             for r in range(rounds)]
    generated = generate_programs(task_type, count, seeds)
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "programs.ndjson")
    with open(path, "w", encoding="utf-8") as fh:
        for program, key in generated:
            fh.write(json.dumps({"program": print_expr(program),
                                 "obs_key": key.digest}) + "\n")
    _write_manifest(out_dir, "gen-programs", seed,
                    task_type=type_to_str(task_type), count=len(generated),
                    rounds=rounds, files=["programs.ndjson"])
    click.echo(f"{len(generated)} programs -> {path}")


def _load_programs(programs_dir: str):
    manifest = _read_manifest(programs_dir)
    task_type = parse_type(manifest["task_type"])
    path = os.path.join(programs_dir, "programs.ndjson")
    programs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            doc = json.loads(line)
            programs.append(parse_expr(doc["program"], task_type))
    return task_type, programs


@main.command("gen-props")
@click.option("--programs", "programs_dir", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="gen-programs output directory (the pruning corpus).")
@click.option("--limit", default=bench.DEFAULT_PROP_LIMIT, show_default=True)
@click.option("--corpus-inputs", default=64, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def gen_props_cmd(programs_dir, limit, corpus_inputs, seed, out_dir):
    """Enumerate candidate properties and prune against a program corpus."""
    task_type, programs = _load_programs(programs_dir)
    inputs = sample_inputs(task_type.arg, corpus_inputs, type_seed(task_type))
    corpus = [(p, inputs) for p in programs]
    props = bench.build_property_catalog((task_type.arg, task_type.ret),
                                         corpus, seed, limit)
    os.makedirs(out_dir, exist_ok=True)
    props.save(os.path.join(out_dir, "props.json"))
    _write_manifest(out_dir, "gen-props", seed,
                    task_type=type_to_str(task_type), n_properties=len(props),
                    programs=os.path.abspath(programs_dir),
                    files=["props.json"])
    click.echo(f"{len(props)} properties -> {out_dir}/props.json")


@main.command("build-dataset")
@click.option("--kind", type=click.Choice(["premise", "composition"]),
              default="premise", show_default=True)
@click.option("--programs", "programs_dir", default=None,
              type=click.Path(exists=True, file_okay=False),
              help="Required for --kind premise.")
@click.option("--props", "props_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--n-functions", default=1000, show_default=True,
              help="Composition only.")
@click.option("--n-pairs", default=5000, show_default=True,
              help="Composition only.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def build_dataset_cmd(kind, programs_dir, props_path, n_functions, n_pairs,
                      seed, out_dir):
    """Featurize programs into premise or composition training data."""
    props = PropertyCatalog.load(props_path)
    os.makedirs(out_dir, exist_ok=True)
    if kind == "premise":
        if not programs_dir:
            raise click.UsageError("--kind premise requires --programs")
        task_type, programs = _load_programs(programs_dir)
        if (task_type.arg, task_type.ret) != props.task_type:
            raise click.UsageError("program and property task types differ")
        examples, skipped = build_premise_dataset(programs, props, seed)
        save_premise_dataset(os.path.join(out_dir, "premise.ndjson"), examples)
        _write_manifest(out_dir, "build-dataset", seed, kind=kind,
                        task_type=type_to_str(task_type),
                        n_examples=len(examples), skipped=skipped,
                        props=os.path.abspath(props_path),
                        files=["premise.ndjson"])
        click.echo(f"{len(examples)} examples ({skipped} skipped) -> {out_dir}")
    else:
        train, test = build_composition_dataset(n_functions, n_pairs, props, seed)
        save_composition_dataset(os.path.join(out_dir, "composition_train.ndjson"),
                                 train)
        save_composition_dataset(os.path.join(out_dir, "composition_test.ndjson"),
                                 test)
        _write_manifest(out_dir, "build-dataset", seed, kind=kind,
                        n_functions=n_functions, n_pairs=n_pairs,
                        train_size=len(train), test_size=len(test),
                        props=os.path.abspath(props_path),
                        files=["composition_train.ndjson",
                               "composition_test.ndjson"])
        click.echo(f"{len(train)}/{len(test)} train/test examples -> {out_dir}")


def _settings_options(fn):
    fn = click.option("--epochs", default=30, show_default=True)(fn)
    fn = click.option("--lr", default=0.02, show_default=True)(fn)
    fn = click.option("--batch", default=64, show_default=True)(fn)
    fn = click.option("--seed", default=0, show_default=True)(fn)
    return fn


@main.command("train-premise")
@click.option("--dataset", "dataset_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--props", "props_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@_settings_options
@click.option("--out", "out_dir", required=True, type=click.Path())
def train_premise_cmd(dataset_path, props_path, epochs, lr, batch, seed, out_dir):
    """Train the component-usage predictor on a premise dataset."""
    props = PropertyCatalog.load(props_path)
    dataset = load_premise_dataset(dataset_path)
    settings = TrainSettings(learning_rate=lr, batch_size=batch, epochs=epochs,
                             seed=seed)
    model, curve = train_premise(dataset, settings, props)
    os.makedirs(out_dir, exist_ok=True)
    save_premise_model(model, os.path.join(out_dir, "premise.npz"))
    with open(os.path.join(out_dir, "curve.json"), "w", encoding="utf-8") as fh:
        json.dump([{"train": t, "val": v} for t, v in curve], fh, indent=2)
    _write_manifest(out_dir, "train-premise", seed, epochs=epochs, lr=lr,
                    batch=batch, dataset=os.path.abspath(dataset_path),
                    props=os.path.abspath(props_path),
                    final_val_loss=curve[-1][1],
                    files=["premise.npz", "curve.json"])
    click.echo(f"final val loss {curve[-1][1]:.4f} -> {out_dir}/premise.npz")


@main.command("train-compose")
@click.option("--train", "train_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--test", "test_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--props", "props_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@_settings_options
@click.option("--out", "out_dir", required=True, type=click.Path())
def train_compose_cmd(train_path, test_path, props_path, epochs, lr, batch,
                      seed, out_dir):
    """Train the composed-signature predictor and report test accuracy."""
    props = PropertyCatalog.load(props_path)
    train = load_composition_dataset(train_path)
    test = load_composition_dataset(test_path)
    settings = TrainSettings(learning_rate=lr, batch_size=batch, epochs=epochs,
                             seed=seed)
    model, metrics = train_composition((train, test), settings, props)
    os.makedirs(out_dir, exist_ok=True)
    save_composition_model(model, os.path.join(out_dir, "composition.npz"))
    summary = {k: v for k, v in metrics.items() if k != "loss_curve"}
    with open(os.path.join(out_dir, "metrics.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
    _write_manifest(out_dir, "train-compose", seed, epochs=epochs, lr=lr,
                    batch=batch, train=os.path.abspath(train_path),
                    test=os.path.abspath(test_path),
                    props=os.path.abspath(props_path),
                    test_accuracy=metrics["test_accuracy"],
                    majority_baseline=metrics["majority_baseline"],
                    files=["composition.npz", "metrics.json"])
    click.echo(f"test accuracy {metrics['test_accuracy']:.3f} "
               f"(majority {metrics['majority_baseline']:.3f}) -> {out_dir}")


# -- one-off synthesis and inspection ----------------------------------------

@main.command("synth")
@click.argument("task_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--model", "model_dir", default=None,
              type=click.Path(exists=True, file_okay=False))
@click.option("--budget-secs", default=60.0, show_default=True)
@click.option("--pops", "max_pops", default=2_000_000, show_default=True)
@click.option("--configs", "configs_per_task", default=16, show_default=True,
              help="Guided configurations to draw (with --model).")
@click.option("--k", default=bench.DEFAULT_K, show_default=True)
@click.option("--parallelism", default=1, show_default=True)
@click.option("--seed", default=0, show_default=True)
def synth_cmd(task_path, model_dir, budget_secs, max_pops, configs_per_task,
              k, parallelism, seed):
    """Synthesize one task; exit 0 solved, 2 exhausted, 3 budget exceeded."""
    task = load_task(task_path)
    if model_dir:
        bundle = ModelBundle.load(model_dir)
        configs, mode = bench.task_configurations(task, bundle,
                                                  configs_per_task, k, seed)
    else:
        configs = [Configuration(default_pool_elements())]
        mode = "full-catalog"
    budget = Budget(max_pops=max_pops, wall_clock=budget_secs)
    result, stats = run_portfolio(task.spec, configs, budget, parallelism)
    pops = sum(s.pops for s in stats)
    if isinstance(result, Solved):
        click.echo(print_expr(result.program))
        click.echo(f"# solved ({mode}) in {result.elapsed * 1000:.0f} ms, "
                   f"{pops} pops", err=True)
        sys.exit(0)
    if isinstance(result, Exhausted):
        click.echo(f"# exhausted after {pops} pops", err=True)
        sys.exit(2)
    click.echo(f"# budget exceeded after {pops} pops", err=True)
    sys.exit(3)


@main.command("sig")
@click.argument("task_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--props", "props_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--model", "model_dir", default=None,
              type=click.Path(exists=True, file_okay=False),
              help="Bundle to pull the task type's catalog from.")
@click.option("--verbose", is_flag=True, help="One line per property.")
def sig_cmd(task_path, props_path, model_dir, verbose):
    """Print a task's estimated property signature."""
    task = load_task(task_path)
    spec = task.spec
    if props_path:
        props = PropertyCatalog.load(props_path)
    elif model_dir:
        bundle = ModelBundle.load(model_dir)
        entry = bundle.lookup(spec.input_type, spec.output_type)
        if entry is None:
            raise click.UsageError(
                f"bundle has no catalog for {type_to_str(spec.input_type)} -> "
                f"{type_to_str(spec.output_type)}")
        props = entry.props
    else:
        raise click.UsageError("pass --props or --model")
    if props.task_type != (spec.input_type, spec.output_type):
        raise click.UsageError("property catalog type differs from the task")
    sig = estimated_signature(props, spec)
    if verbose:
        for p, v in zip(props, sig):
            click.echo(f"{v.name:9s} {p.text}")
    else:
        click.echo(signature_to_str(sig))


@main.command("catalog-dump")
@click.option("--json", "as_json", is_flag=True)
def catalog_dump_cmd(as_json):
    """Print the component catalog (id, name, cost, type scheme)."""
    cat = catalog()
    if as_json:
        rows = [{"cid": c.cid, "name": c.name, "cost": c.cost,
                 "scheme": str(c.scheme)} for c in cat]
        click.echo(json.dumps({"catalog_hash": cat.hash(), "components": rows},
                              indent=2))
        return
    click.echo(f"# {len(cat)} components, hash {cat.hash()}")
    for c in cat:
        click.echo(f"{c.cid:3d}  {c.name:12s} cost {c.cost}  {str(c.scheme)}")


if __name__ == "__main__":
    main()
