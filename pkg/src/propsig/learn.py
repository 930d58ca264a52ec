"""From-scratch feedforward models over property signatures.

Two model families share one shape: a learned 4-dim embedding per
abstract value, two 256-unit rectifier layers, and a task head.  The
premise selector regresses per-component usage counts (softplus head,
MSE on log(1+count)); the composition predictor classifies each
property position of sig(g) from concat(sig(f), sig(f∘g)) (3-way
cross-entropy per position).  Backpropagation is hand-rolled in numpy
(float64) and verified against central finite differences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .components import catalog
from .datagen import sample_configuration
from .props import AbstractValue, PropertyCatalog, Signature
from .synth import Configuration

EMBED_DIM = 4
HIDDEN = 256
WEIGHT_FLOOR = 1e-3


class TrainingDiverged(RuntimeError):
    """Loss became non-finite; training aborted."""


class CheckpointMismatch(ValueError):
    """Checkpoint hashes disagree with the live catalogs."""


@dataclass(frozen=True, slots=True)
class TrainSettings:
    learning_rate: float = 0.02
    batch_size: int = 64
    epochs: int = 30
    seed: int = 0
    momentum: float = 0.9

    def __post_init__(self):
        if self.learning_rate <= 0 or self.batch_size < 1 or self.epochs < 1:
            raise ValueError("training settings must be positive")


@dataclass
class PremiseModel:
    params: dict
    n_props: int
    catalog_hash: str
    property_hash: str


@dataclass
class CompositionModel:
    params: dict
    n_props: int
    catalog_hash: str
    property_hash: str


def _init_params(rng: np.random.Generator, in_dim: int, out_dim: int) -> dict:
    return {
        "emb": rng.normal(0.0, 0.5, (3, EMBED_DIM)),
        "W1": rng.normal(0.0, np.sqrt(2.0 / in_dim), (in_dim, HIDDEN)),
        "b1": np.zeros(HIDDEN),
        "W2": rng.normal(0.0, np.sqrt(2.0 / HIDDEN), (HIDDEN, HIDDEN)),
        "b2": np.zeros(HIDDEN),
        "W3": rng.normal(0.0, np.sqrt(2.0 / HIDDEN), (HIDDEN, out_dim)),
        "b3": np.zeros(out_dim),
    }


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _net(params: dict, codes: np.ndarray):
    """Shared trunk: embed incoming codes, two rectifier layers, linear head."""
    x = params["emb"][codes].reshape(codes.shape[0], -1)
    z1 = x @ params["W1"] + params["b1"]
    h1 = np.maximum(z1, 0.0)
    z2 = h1 @ params["W2"] + params["b2"]
    h2 = np.maximum(z2, 0.0)
    z3 = h2 @ params["W3"] + params["b3"]
    return x, z1, h1, z2, h2, z3


def _backprop(params: dict, codes, x, z1, z2, h1, h2, dz3) -> dict:
    g = {"W3": h2.T @ dz3, "b3": dz3.sum(0)}
    dz2 = (dz3 @ params["W3"].T) * (z2 > 0)
    g["W2"] = h1.T @ dz2
    g["b2"] = dz2.sum(0)
    dz1 = (dz2 @ params["W2"].T) * (z1 > 0)
    g["W1"] = x.T @ dz1
    g["b1"] = dz1.sum(0)
    dx = dz1 @ params["W1"].T
    demb = np.zeros_like(params["emb"])
    np.add.at(demb, codes.reshape(-1), dx.reshape(-1, EMBED_DIM))
    g["emb"] = demb
    return g


# -- premise selector -------------------------------------------------------

def premise_outputs(params: dict, codes: np.ndarray) -> np.ndarray:
    _x, _z1, _h1, _z2, _h2, z3 = _net(params, codes)
    return np.logaddexp(0.0, z3)  # softplus keeps counts non-negative


def premise_loss(params: dict, codes, targets) -> float:
    diff = premise_outputs(params, codes) - targets
    return float(np.mean(diff * diff))


def premise_loss_and_grads(params: dict, codes, targets):
    x, z1, h1, z2, h2, z3 = _net(params, codes)
    out = np.logaddexp(0.0, z3)
    diff = out - targets
    loss = float(np.mean(diff * diff))
    dout = (2.0 / diff.size) * diff
    dz3 = dout * _sigmoid(z3)
    return loss, _backprop(params, codes, x, z1, z2, h1, h2, dz3)


def _codes(sig: Signature) -> list[int]:
    return [int(v) for v in sig]


def forward_premise(model: PremiseModel, sig: Signature) -> np.ndarray:
    """Predicted usage count per catalog component, all >= 0."""
    if len(sig) != model.n_props:
        raise ValueError(f"signature length {len(sig)} != model's {model.n_props}")
    if model.catalog_hash != catalog().hash():
        raise ValueError("model was trained against a different component catalog")
    codes = np.array([_codes(sig)], dtype=np.int64)
    return premise_outputs(model.params, codes)[0]


def train_premise(dataset, settings: TrainSettings,
                  property_catalog: PropertyCatalog | None = None
                  ) -> tuple[PremiseModel, list[tuple[float, float]]]:
    """Fit the premise selector; returns (model, per-epoch loss curve).

    The curve holds (mean train batch loss, validation loss) pairs; the
    validation split is 10% of the dataset, chosen by the seed.
    """
    dataset = list(dataset)
    if not dataset:
        raise ValueError("dataset must be non-empty")
    n_props = len(dataset[0].signature)
    n_comp = len(catalog())
    for ex in dataset:
        if len(ex.signature) != n_props or len(ex.counts) != n_comp:
            raise ValueError("dataset dimensions are not homogeneous")
    X = np.array([_codes(ex.signature) for ex in dataset], dtype=np.int64)
    Y = np.log1p(np.array([ex.counts for ex in dataset], dtype=np.float64))

    rng = np.random.Generator(np.random.PCG64(settings.seed))
    params = _init_params(rng, n_props * EMBED_DIM, n_comp)
    n = len(dataset)
    perm = rng.permutation(n)
    n_val = max(1, n // 10)
    val_idx = perm[:n_val]
    train_idx = perm[n_val:]
    if train_idx.size == 0:
        train_idx = val_idx

    vel = {k: np.zeros_like(v) for k, v in params.items()}
    curve: list[tuple[float, float]] = []
    for epoch in range(settings.epochs):
        order = train_idx[rng.permutation(train_idx.size)]
        total = 0.0
        batches = 0
        for s in range(0, order.size, settings.batch_size):
            idx = order[s:s + settings.batch_size]
            loss, grads = premise_loss_and_grads(params, X[idx], Y[idx])
            if not np.isfinite(loss):
                raise TrainingDiverged(
                    f"training loss became {loss} at epoch {epoch}; "
                    f"lower the learning rate (currently {settings.learning_rate})"
                )
            total += loss
            batches += 1
            for k in params:
                vel[k] = settings.momentum * vel[k] - settings.learning_rate * grads[k]
                params[k] += vel[k]
        val = premise_loss(params, X[val_idx], Y[val_idx])
        if not np.isfinite(val):
            raise TrainingDiverged(f"validation loss became {val} at epoch {epoch}")
        curve.append((total / max(1, batches), val))
    model = PremiseModel(params, n_props, catalog().hash(),
                         property_catalog.hash() if property_catalog else "")
    return model, curve


# -- composition predictor --------------------------------------------------

def composition_logits(params: dict, codes: np.ndarray) -> np.ndarray:
    _x, _z1, _h1, _z2, _h2, z3 = _net(params, codes)
    return z3.reshape(codes.shape[0], -1, 3)


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    m = logits.max(axis=-1, keepdims=True)
    s = logits - m
    return s - np.log(np.exp(s).sum(axis=-1, keepdims=True))


def composition_loss(params: dict, codes, targets) -> float:
    logp = _log_softmax(composition_logits(params, codes))
    b, p = targets.shape
    picked = logp[np.arange(b)[:, None], np.arange(p)[None, :], targets]
    return float(-picked.mean())


def composition_loss_and_grads(params: dict, codes, targets):
    x, z1, h1, z2, h2, z3 = _net(params, codes)
    b = codes.shape[0]
    logits = z3.reshape(b, -1, 3)
    p = logits.shape[1]
    logp = _log_softmax(logits)
    picked = logp[np.arange(b)[:, None], np.arange(p)[None, :], targets]
    loss = float(-picked.mean())
    dlogits = np.exp(logp)
    dlogits[np.arange(b)[:, None], np.arange(p)[None, :], targets] -= 1.0
    dlogits /= b * p
    dz3 = dlogits.reshape(b, -1)
    return loss, _backprop(params, codes, x, z1, z2, h1, h2, dz3)


def train_composition(dataset, settings: TrainSettings,
                      property_catalog: PropertyCatalog | None = None
                      ) -> tuple[CompositionModel, dict]:
    """Fit the composition predictor on (train, test) example lists.

    Metrics report per-property and whole-signature accuracy on the test
    split, next to the majority-class baseline computed on the train split.
    """
    train_examples, test_examples = dataset
    train_examples = list(train_examples)
    test_examples = list(test_examples)
    if not train_examples:
        raise ValueError("train split must be non-empty")
    n_props = len(train_examples[0].sig_f)

    def encode(examples):
        xs = np.array([_codes(ex.sig_f) + _codes(ex.sig_fg) for ex in examples],
                      dtype=np.int64)
        ts = np.array([_codes(ex.sig_g) for ex in examples], dtype=np.int64)
        if xs.shape[1] != 2 * n_props or ts.shape[1] != n_props:
            raise ValueError("dataset dimensions are not homogeneous")
        return xs, ts

    X, T = encode(train_examples)
    rng = np.random.Generator(np.random.PCG64(settings.seed))
    params = _init_params(rng, 2 * n_props * EMBED_DIM, n_props * 3)
    vel = {k: np.zeros_like(v) for k, v in params.items()}
    curve: list[float] = []
    n = len(train_examples)
    for epoch in range(settings.epochs):
        order = rng.permutation(n)
        total = 0.0
        batches = 0
        for s in range(0, n, settings.batch_size):
            idx = order[s:s + settings.batch_size]
            loss, grads = composition_loss_and_grads(params, X[idx], T[idx])
            if not np.isfinite(loss):
                raise TrainingDiverged(
                    f"training loss became {loss} at epoch {epoch}; "
                    f"lower the learning rate (currently {settings.learning_rate})"
                )
            total += loss
            batches += 1
            for k in params:
                vel[k] = settings.momentum * vel[k] - settings.learning_rate * grads[k]
                params[k] += vel[k]
        curve.append(total / max(1, batches))

    model = CompositionModel(params, n_props, catalog().hash(),
                             property_catalog.hash() if property_catalog else "")
    metrics: dict = {"loss_curve": curve}
    majority = np.array([np.bincount(T[:, j], minlength=3).argmax()
                         for j in range(n_props)])
    if test_examples:
        Xt, Tt = encode(test_examples)
        pred = composition_logits(params, Xt).argmax(axis=-1)
        metrics["test_accuracy"] = float((pred == Tt).mean())
        metrics["whole_signature_accuracy"] = float((pred == Tt).all(axis=1).mean())
        metrics["majority_baseline"] = float((majority[None, :] == Tt).mean())
        metrics["test_size"] = len(test_examples)
    metrics["train_size"] = len(train_examples)
    return model, metrics


def predict_missing_signature(model: CompositionModel, sig_f: Signature,
                              sig_fg: Signature) -> Signature:
    """Per-position argmax class: the predicted signature of g."""
    if len(sig_f) != model.n_props or len(sig_fg) != model.n_props:
        raise ValueError("signature lengths do not match the model")
    codes = np.array([_codes(sig_f) + _codes(sig_fg)], dtype=np.int64)
    pred = composition_logits(model.params, codes).argmax(axis=-1)[0]
    return tuple(AbstractValue(int(c)) for c in pred)


# -- gradient verification ----------------------------------------------------

def grad_check(model, example, step: float = 1e-4, n_checks: int = 120,
               seed: int = 0, _grad_fn=None) -> float:
    """Max relative error between analytic and central-difference gradients.

    Checks at least 100 randomly chosen parameters (all arrays eligible,
    embeddings included).  _grad_fn exists so tests can inject a broken
    gradient and confirm the detector fires.
    """
    if isinstance(model, PremiseModel):
        codes = np.array([_codes(example.signature)], dtype=np.int64)
        target = np.log1p(np.array([example.counts], dtype=np.float64))
        loss_fn = premise_loss
        grad_fn = _grad_fn or premise_loss_and_grads
    elif isinstance(model, CompositionModel):
        codes = np.array([_codes(example.sig_f) + _codes(example.sig_fg)],
                         dtype=np.int64)
        target = np.array([_codes(example.sig_g)], dtype=np.int64)
        loss_fn = composition_loss
        grad_fn = _grad_fn or composition_loss_and_grads
    else:
        raise TypeError(f"unsupported model type {type(model).__name__}")

    params = model.params
    _loss, grads = grad_fn(params, codes, target)
    names = sorted(params)
    sizes = [params[k].size for k in names]
    total = sum(sizes)
    rng = np.random.Generator(np.random.PCG64(seed))
    picks = rng.choice(total, size=min(max(n_checks, 100), total), replace=False)

    worst = 0.0
    for flat in picks:
        flat = int(flat)
        for name, size in zip(names, sizes):
            if flat < size:
                break
            flat -= size
        arr = params[name]
        orig = arr.flat[flat]
        arr.flat[flat] = orig + step
        up = loss_fn(params, codes, target)
        arr.flat[flat] = orig - step
        down = loss_fn(params, codes, target)
        arr.flat[flat] = orig
        numeric = (up - down) / (2.0 * step)
        analytic = float(grads[name].flat[flat])
        err = abs(analytic - numeric) / max(1e-6, abs(analytic) + abs(numeric))
        worst = max(worst, err)
    return worst


# -- configuration samplers ---------------------------------------------------

def sample_guided_config(model: PremiseModel, sig: Signature, k: int, seed: int,
                         max_cost: int | None = None,
                         fuel: int | None = None) -> Configuration:
    """Pool elements drawn ∝ max(predicted count, the ε floor)."""
    weights = np.maximum(forward_premise(model, sig), WEIGHT_FLOOR)
    return sample_configuration(weights, k, seed, max_cost=max_cost, fuel=fuel)


def sample_baseline_config(training_counts, k: int, seed: int,
                           max_cost: int | None = None,
                           fuel: int | None = None) -> Configuration:
    """Pool elements drawn ∝ training-set appearance rates (ε-floored)."""
    totals = np.asarray(training_counts, dtype=np.float64)
    if totals.shape != (len(catalog()),):
        raise ValueError(f"training_counts must have length {len(catalog())}")
    s = totals.sum()
    rates = totals / s if s > 0 else np.full(totals.shape, 1.0 / totals.size)
    weights = np.maximum(rates, WEIGHT_FLOOR)
    return sample_configuration(weights, k, seed, max_cost=max_cost, fuel=fuel)


# -- checkpoints --------------------------------------------------------------

_KINDS = {"premise": PremiseModel, "composition": CompositionModel}


def _save_model(model, kind: str, path: str) -> None:
    meta = {
        "kind": kind,
        "n_props": model.n_props,
        "catalog_hash": model.catalog_hash,
        "property_hash": model.property_hash,
    }
    blob = np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8)
    with open(path, "wb") as fh:  # keep the exact path, no .npz suffixing
        np.savez(fh, meta=blob, **model.params)


def _load_model(kind: str, path: str,
                property_catalog: PropertyCatalog | None):
    with np.load(path, allow_pickle=False) as npz:
        meta = json.loads(bytes(npz["meta"]))
        params = {k: np.array(npz[k], dtype=np.float64)
                  for k in npz.files if k != "meta"}
    if meta.get("kind") != kind:
        raise CheckpointMismatch(
            f"{path} holds a {meta.get('kind')!r} model, expected {kind!r}"
        )
    if meta["catalog_hash"] != catalog().hash():
        raise CheckpointMismatch(
            "checkpoint was trained against a different component catalog"
        )
    if property_catalog is not None and meta["property_hash"] != property_catalog.hash():
        raise CheckpointMismatch(
            "checkpoint was trained against a different property catalog"
        )
    cls = _KINDS[kind]
    return cls(params, int(meta["n_props"]), meta["catalog_hash"],
               meta["property_hash"])


def save_premise_model(model: PremiseModel, path: str) -> None:
    _save_model(model, "premise", path)


def load_premise_model(path: str,
                       property_catalog: PropertyCatalog | None = None
                       ) -> PremiseModel:
    return _load_model("premise", path, property_catalog)


def save_composition_model(model: CompositionModel, path: str) -> None:
    _save_model(model, "composition", path)


def load_composition_model(path: str,
                           property_catalog: PropertyCatalog | None = None
                           ) -> CompositionModel:
    return _load_model("composition", path, property_catalog)
