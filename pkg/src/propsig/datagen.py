"""Training-data generation.

Random programs per task type (deduplicated by observational
equivalence on a fixed probe set), premise-selection examples
(signature -> component usage counts), and composition examples
(sig f, sig f∘g -> sig g).  Everything is a pure function of its seeds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from hashlib import blake2b
from typing import Iterable, Sequence

import numpy as np

from .ast import Expr, compose
from .components import PoolElement, catalog, component_counts
from .evalcore import DEFAULT_FUEL
from .props import (
    EmptySampleError,
    PropertyCatalog,
    Signature,
    estimated_signature,
    ok_pairs,
    parse_signature,
    program_signature,
    signature_to_str,
)
from .specio import IOSpec
from .synth import Budget, Configuration, ObsKey, enumerate_closed, observational_key
from .types import BOOL, INT, FunT, ListT, PairT, Type, parse_type, type_to_str

# reconstruction of the fixed set of training task types
TASK_TYPES: tuple[FunT, ...] = tuple(
    parse_type(s)
    for s in (
        "Int -> Int",
        "Int -> Bool",
        "Bool -> Bool",
        "Int -> List<Int>",
        "(Int, Int) -> Int",
        "(Int, Int) -> Bool",
        "(Int, Int) -> (Int, Int)",
        "List<Int> -> Int",
        "List<Int> -> Bool",
        "List<Int> -> List<Int>",
        "(List<Int>, Int) -> Int",
        "(List<Int>, Int) -> List<Int>",
        "(List<Int>, List<Int>) -> Int",
        "(List<Int>, List<Int>) -> List<Int>",
    )
)

INT_RANGE = (-50, 50)
MAX_LIST_LEN = 8
PROBE_COUNT = 16
PAIRS_PER_EXAMPLE = 5


@dataclass(frozen=True, slots=True)
class TrainingExample:
    signature: Signature
    counts: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class CompositionExample:
    sig_f: Signature
    sig_fg: Signature
    sig_g: Signature


def degenerate_value(t: Type):
    """The type's canonical trivial inhabitant (0, false, [], pairs thereof)."""
    if t == INT:
        return 0
    if t == BOOL:
        return False
    if isinstance(t, ListT):
        return []
    if isinstance(t, PairT):
        return (degenerate_value(t.fst), degenerate_value(t.snd))
    raise ValueError(f"no degenerate value for {type_to_str(t)}")


def _random_value(t: Type, rng: np.random.Generator):
    if t == INT:
        return int(rng.integers(INT_RANGE[0], INT_RANGE[1] + 1))
    if t == BOOL:
        return bool(rng.integers(0, 2))
    if isinstance(t, ListT):
        n = int(rng.integers(0, MAX_LIST_LEN + 1))
        return [_random_value(t.elem, rng) for _ in range(n)]
    if isinstance(t, PairT):
        return (_random_value(t.fst, rng), _random_value(t.snd, rng))
    raise ValueError(f"cannot sample a {type_to_str(t)}")


def sample_inputs(t: Type, n: int, seed: int) -> list:
    """n values of type t; the degenerate value always comes first."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    out = [degenerate_value(t)]
    while len(out) < n:
        out.append(_random_value(t, rng))
    return out


def type_seed(t: Type) -> int:
    """Stable master seed for a type, derived from its printed form."""
    return int.from_bytes(
        blake2b(type_to_str(t).encode(), digest_size=8).digest(), "big"
    )


def sample_configuration(weights, k: int, seed: int,
                         max_cost: int | None = None,
                         fuel: int | None = None) -> Configuration:
    """k distinct pool elements, drawn without replacement ∝ weights.

    Weights index the full catalog; elements come out sorted by
    component id so a configuration is canonical for its member set.
    """
    cat = catalog()
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(cat),):
        raise ValueError(f"weights must have length {len(cat)}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and non-negative")
    support = int(np.count_nonzero(w > 0))
    if not 1 <= k <= support:
        raise ValueError(f"k={k} exceeds the {support} positive-weight components")
    rng = np.random.Generator(np.random.PCG64(seed))
    remaining = [i for i in range(len(cat)) if w[i] > 0]
    chosen = []
    for _ in range(k):
        total = float(sum(w[i] for i in remaining))
        r = rng.random() * total
        acc = 0.0
        pick = len(remaining) - 1
        for pos, i in enumerate(remaining):
            acc += float(w[i])
            if r < acc:
                pick = pos
                break
        chosen.append(remaining.pop(pick))
    kwargs = {}
    if max_cost is not None:
        kwargs["max_cost"] = max_cost
    if fuel is not None:
        kwargs["fuel"] = fuel
    elements = tuple(PoolElement(i, cat[i].cost) for i in sorted(chosen))
    return Configuration(elements, **kwargs)


def generate_programs(task_type: FunT, per_type_limit: int,
                      seeds: Iterable[int], *,
                      per_config_programs: int = 200,
                      per_config_pops: int = 20_000,
                      k_range: tuple[int, int] = (6, 16),
                      fuel: int = DEFAULT_FUEL) -> list[tuple[Expr, ObsKey]]:
    """Observationally-distinct programs of the given type, cost-ordered
    within each sampled configuration, first-seen keys kept."""
    if per_type_limit < 1:
        raise ValueError("per_type_limit must be >= 1")
    if not isinstance(task_type, FunT):
        raise ValueError("task_type must be a function type")
    probes = sample_inputs(task_type.arg, PROBE_COUNT, type_seed(task_type))
    uniform = np.ones(len(catalog()))
    seen: dict[str, None] = {}
    out: list[tuple[Expr, ObsKey]] = []
    for seed in seeds:
        rng = np.random.Generator(np.random.PCG64(seed))
        k = int(rng.integers(k_range[0], k_range[1] + 1))
        config = sample_configuration(
            uniform, k, int(rng.integers(0, 2**62)), fuel=fuel
        )
        for program, _cost in enumerate_closed(
            task_type, config, max_programs=per_config_programs,
            budget=Budget(max_pops=per_config_pops),
        ):
            key = observational_key(program, probes, fuel)
            if key.digest in seen:
                continue
            seen[key.digest] = None
            out.append((program, key))
            if len(out) >= per_type_limit:
                return out
    return out


def build_premise_dataset(programs, property_catalog: PropertyCatalog,
                          seed: int, fuel: int = DEFAULT_FUEL
                          ) -> tuple[list[TrainingExample], int]:
    """One example per program: estimated signature over 5 sampled I/O
    pairs, paired with the program's component usage counts.

    Returns (examples, skipped) where skipped counts programs that
    erred on all sampled inputs.
    """
    tin, tout = property_catalog.task_type
    progs = [p[0] if isinstance(p, tuple) else p for p in programs]
    seeds = np.random.SeedSequence(seed).generate_state(max(1, len(progs)),
                                                        dtype=np.uint64)
    examples: list[TrainingExample] = []
    skipped = 0
    for i, program in enumerate(progs):
        inputs = sample_inputs(tin, PAIRS_PER_EXAMPLE, int(seeds[i]))
        pairs = ok_pairs(program, inputs, fuel)
        if not pairs:
            skipped += 1
            continue
        spec = IOSpec(tin, tout, tuple(pairs))
        sig = estimated_signature(property_catalog, spec, fuel)
        examples.append(TrainingExample(sig, tuple(component_counts(program))))
    return examples, skipped


def build_composition_dataset(n_functions: int, n_pairs: int,
                              property_catalog: PropertyCatalog, seed: int, *,
                              fuel: int = DEFAULT_FUEL,
                              n_inputs: int = 64,
                              generation_rounds: int = 400,
                              ) -> tuple[list[CompositionExample],
                                         list[CompositionExample]]:
    """(train, test) composition examples over List<Int> -> List<Int>.

    Pairs whose composition (or either endpoint) errs on every sampled
    input are redrawn, so the requested count is met exactly; the split
    is 90/10 by a seeded permutation.
    """
    list_int = ListT(INT)
    if property_catalog.task_type != (list_int, list_int):
        raise ValueError("composition datasets need a List<Int> -> List<Int> catalog")
    ss = np.random.SeedSequence(seed)
    gen_ss, pair_ss, input_ss, split_ss = ss.spawn(4)
    gen_seeds = [int(s) for s in gen_ss.generate_state(generation_rounds,
                                                       dtype=np.uint64)]
    generated = generate_programs(FunT(list_int, list_int), n_functions,
                                  gen_seeds, fuel=fuel)
    programs = [p for p, _key in generated]
    if len(programs) < 2:
        raise RuntimeError("not enough distinct programs were generated")
    inputs = sample_inputs(list_int, n_inputs,
                           int(input_ss.generate_state(1, dtype=np.uint64)[0]))

    sigs: list[Signature | None] = []
    for p in programs:
        try:
            sigs.append(program_signature(property_catalog, p, inputs, fuel))
        except EmptySampleError:
            sigs.append(None)

    rng = np.random.Generator(np.random.PCG64(pair_ss))
    examples: list[CompositionExample] = []
    attempts = 0
    max_attempts = max(1000, 100 * n_pairs)
    while len(examples) < n_pairs:
        attempts += 1
        if attempts > max_attempts:
            raise RuntimeError(
                f"gave up after {attempts} draws with "
                f"{len(examples)}/{n_pairs} valid composition pairs"
            )
        i = int(rng.integers(0, len(programs)))
        j = int(rng.integers(0, len(programs)))
        if sigs[i] is None or sigs[j] is None:
            continue
        composed = compose(programs[i], programs[j])
        try:
            sig_fg = program_signature(property_catalog, composed, inputs, fuel)
        except EmptySampleError:
            continue
        examples.append(CompositionExample(sigs[i], sig_fg, sigs[j]))

    split_rng = np.random.Generator(np.random.PCG64(split_ss))
    order = split_rng.permutation(n_pairs)
    n_test = n_pairs // 10
    test = [examples[i] for i in order[:n_test]]
    train = [examples[i] for i in order[n_test:]]
    return train, test


# -- newline-delimited JSON dataset files ----------------------------------

def save_premise_dataset(path: str, examples: Sequence[TrainingExample]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ex in examples:
            fh.write(json.dumps({
                "signature": signature_to_str(ex.signature),
                "counts": list(ex.counts),
            }, separators=(",", ":")))
            fh.write("\n")


def load_premise_dataset(path: str) -> list[TrainingExample]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            doc = json.loads(line)
            out.append(TrainingExample(parse_signature(doc["signature"]),
                                       tuple(int(c) for c in doc["counts"])))
    return out


def save_composition_dataset(path: str,
                             examples: Sequence[CompositionExample]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ex in examples:
            fh.write(json.dumps({
                "sig_f": signature_to_str(ex.sig_f),
                "sig_fg": signature_to_str(ex.sig_fg),
                "sig_g": signature_to_str(ex.sig_g),
            }, separators=(",", ":")))
            fh.write("\n")


def load_composition_dataset(path: str) -> list[CompositionExample]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            doc = json.loads(line)
            out.append(CompositionExample(parse_signature(doc["sig_f"]),
                                          parse_signature(doc["sig_fg"]),
                                          parse_signature(doc["sig_g"])))
    return out
