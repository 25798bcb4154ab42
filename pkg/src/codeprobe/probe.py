"""Linear probing classifiers over frozen embeddings.

Multinomial logistic regression (softmax, no hidden units) trained with
full-batch gradient descent, plus the layer-wise and sample-size analyses.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._util import CodeProbeError, mix64
from .embedstore import EmbeddingSet, check_alignment
from .tasks import Split, TaskDataset, TaskKind


@dataclass
class ProbeConfig:
    l2_lambda: float = 1e-4
    epochs: int = 200
    learning_rate: float = 0.1  # halved every 50 epochs
    lr_decay_every: int = 50
    lr_decay: float = 0.5
    seed: int = 0
    standardize: bool = True

    def __post_init__(self):
        if self.epochs < 1:
            raise CodeProbeError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise CodeProbeError("learning rate must be positive")


@dataclass
class ProbeModel:
    weights: np.ndarray  # (class_count, dim)
    bias: np.ndarray  # (class_count,)
    scaler_mean: np.ndarray  # (dim,)
    scaler_std: np.ndarray  # (dim,), floored at 1e-8
    losses: list[float] = field(default_factory=list)

    @property
    def class_count(self) -> int:
        return int(self.weights.shape[0])

    def transform(self, features: np.ndarray) -> np.ndarray:
        return (features - self.scaler_mean) / self.scaler_std

    def predict(self, features: np.ndarray) -> np.ndarray:
        if features.ndim != 2 or features.shape[1] != self.weights.shape[1]:
            raise CodeProbeError(
                f"feature dimension mismatch: got {features.shape}, "
                f"model expects dim {self.weights.shape[1]}"
            )
        logits = self.transform(features) @ self.weights.T + self.bias
        return np.argmax(logits, axis=1)  # ties break to the lowest class code


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def softmax_loss_grad(
    weights: np.ndarray,
    bias: np.ndarray,
    features: np.ndarray,
    labels: np.ndarray,
    l2_lambda: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy + (lambda/2)*||W||^2 and its analytic gradient."""
    n = features.shape[0]
    logits = features @ weights.T + bias
    probs = _softmax(logits)
    eps = 1e-12
    nll = -np.mean(np.log(probs[np.arange(n), labels] + eps))
    loss = nll + 0.5 * l2_lambda * float(np.sum(weights * weights))
    delta = probs
    delta[np.arange(n), labels] -= 1.0
    grad_w = delta.T @ features / n + l2_lambda * weights
    grad_b = delta.mean(axis=0)
    return float(loss), grad_w, grad_b


def _canonical_order(features: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Row order independent of input permutation: sort by label then by
    feature bytes. Makes training bitwise permutation-invariant."""
    keys = [features[:, j] for j in range(features.shape[1] - 1, -1, -1)]
    keys.append(labels)
    return np.lexsort(keys)


def train_linear_probe(
    features: np.ndarray,
    labels: np.ndarray,
    config: ProbeConfig | None = None,
    class_count: int | None = None,
) -> ProbeModel:
    """Fit softmax regression with full-batch gradient descent."""
    config = config or ProbeConfig()
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.ndim != 2:
        raise CodeProbeError("features must be a 2-D matrix")
    if not np.isfinite(features).all():
        raise CodeProbeError("features contain non-finite values")
    n, dim = features.shape
    if class_count is None:
        class_count = int(labels.max()) + 1
    if labels.min() < 0 or labels.max() >= class_count:
        raise CodeProbeError("labels out of range")
    if n < class_count:
        raise CodeProbeError(f"need at least {class_count} rows, got {n}")

    order = _canonical_order(features, labels)
    features = features[order]
    labels = labels[order]

    mean = features.mean(axis=0)
    std = features.std(axis=0)
    std = np.maximum(std, 1e-8)
    if not config.standardize:
        mean = np.zeros(dim)
        std = np.ones(dim)
    xs = (features - mean) / std

    weights = np.zeros((class_count, dim))
    bias = np.zeros(class_count)
    losses: list[float] = []
    for epoch in range(config.epochs):
        lr = config.learning_rate * config.lr_decay ** (epoch // config.lr_decay_every)
        loss, grad_w, grad_b = softmax_loss_grad(weights, bias, xs, labels, config.l2_lambda)
        if not np.isfinite(loss):
            raise CodeProbeError(
                "training diverged (non-finite loss); try a smaller learning rate"
            )
        losses.append(loss)
        weights -= lr * grad_w
        bias -= lr * grad_b
    return ProbeModel(
        weights=weights, bias=bias, scaler_mean=mean, scaler_std=std, losses=losses
    )


def evaluate(model: ProbeModel, features: np.ndarray, labels: np.ndarray) -> float:
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.shape[0] == 0:
        raise CodeProbeError("empty evaluation set")
    pred = model.predict(features)
    return float(np.mean(pred == labels))


# ---------------------------------------------------------------------------
# Analyses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeEntry:
    task: TaskKind
    layer: int
    train_size: int
    seed: int
    train_accuracy: float
    test_accuracy: float


@dataclass
class ProbeResults:
    entries: list[ProbeEntry] = field(default_factory=list)

    def filter(self, **kwargs) -> list[ProbeEntry]:
        out = self.entries
        for key, value in kwargs.items():
            out = [e for e in out if getattr(e, key) == value]
        return out


def _split_arrays(
    dataset: TaskDataset, embeddings: EmbeddingSet, layer: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    labels = np.array([inst.label for inst in dataset.instances], dtype=np.int64)
    train_idx = np.array(dataset.split_indices(Split.Train), dtype=np.int64)
    test_idx = np.array(dataset.split_indices(Split.Test), dtype=np.int64)
    x = embeddings.vectors[layer].astype(np.float64)
    return x[train_idx], labels[train_idx], x[test_idx], labels[test_idx]


def run_layerwise(
    dataset: TaskDataset,
    embeddings: EmbeddingSet,
    config: ProbeConfig | None = None,
    layers: list[int] | None = None,
) -> ProbeResults:
    """One probe per layer on the dataset's train/test split."""
    config = config or ProbeConfig()
    check_alignment(embeddings, dataset)
    layers = list(range(embeddings.n_layers)) if layers is None else layers
    results = ProbeResults()
    for layer in layers:
        xtr, ytr, xte, yte = _split_arrays(dataset, embeddings, layer)
        model = train_linear_probe(xtr, ytr, config, class_count=dataset.class_count)
        results.entries.append(
            ProbeEntry(
                task=dataset.task,
                layer=layer,
                train_size=int(xtr.shape[0]),
                seed=config.seed,
                train_accuracy=evaluate(model, xtr, ytr),
                test_accuracy=evaluate(model, xte, yte),
            )
        )
    return results


def _balanced_subsample(
    labels: np.ndarray, indices: np.ndarray, total: int, class_count: int, seed: int
) -> np.ndarray:
    """Class-balanced seeded subsample of `indices` with `total` elements."""
    per_class = total // class_count
    if per_class < 1:
        raise CodeProbeError(f"subsample size {total} smaller than class count {class_count}")
    rng = random.Random(mix64(seed, total, 0x5A3))
    chosen: list[int] = []
    for c in range(class_count):
        pool = [int(i) for i in indices if labels[i] == c]
        if len(pool) < per_class:
            raise CodeProbeError(
                f"class {c} has only {len(pool)} training rows, need {per_class}"
            )
        chosen.extend(rng.sample(pool, per_class))
    chosen.sort()
    return np.array(chosen, dtype=np.int64)


def run_sample_curve(
    dataset: TaskDataset,
    embeddings: EmbeddingSet,
    sizes: list[int] | None = None,
    config: ProbeConfig | None = None,
    split_ratio: float = 0.8,
) -> ProbeResults:
    """Probe every layer at several nominal dataset sizes; the training split
    is subsampled (class-balanced) to size*split_ratio, the full test split
    is reused."""
    config = config or ProbeConfig()
    sizes = sizes or [100, 1000, 10_000]
    check_alignment(embeddings, dataset)
    labels = np.array([inst.label for inst in dataset.instances], dtype=np.int64)
    train_idx = np.array(dataset.split_indices(Split.Train), dtype=np.int64)
    test_idx = np.array(dataset.split_indices(Split.Test), dtype=np.int64)
    if max(sizes) > len(dataset.instances):
        raise CodeProbeError(
            f"requested size {max(sizes)} exceeds dataset size {len(dataset.instances)}"
        )
    results = ProbeResults()
    for size in sizes:
        n_train = max(1, round(size * split_ratio))
        sub = _balanced_subsample(labels, train_idx, n_train, dataset.class_count, config.seed)
        for layer in range(embeddings.n_layers):
            x = embeddings.vectors[layer].astype(np.float64)
            model = train_linear_probe(
                x[sub], labels[sub], config, class_count=dataset.class_count
            )
            results.entries.append(
                ProbeEntry(
                    task=dataset.task,
                    layer=layer,
                    train_size=size,
                    seed=config.seed,
                    train_accuracy=evaluate(model, x[sub], labels[sub]),
                    test_accuracy=evaluate(model, x[test_idx], labels[test_idx]),
                )
            )
    return results


# ---------------------------------------------------------------------------
# Results CSV
# ---------------------------------------------------------------------------

CSV_COLUMNS = ["task", "layer", "train_size", "seed", "train_acc", "test_acc"]


def write_results(results: ProbeResults, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for e in results.entries:
            writer.writerow(
                [
                    e.task.value,
                    e.layer,
                    e.train_size,
                    e.seed,
                    f"{e.train_accuracy:.6f}",
                    f"{e.test_accuracy:.6f}",
                ]
            )


def read_results(path: str | Path) -> ProbeResults:
    results = ProbeResults()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or list(reader.fieldnames) != CSV_COLUMNS:
            raise CodeProbeError(f"{path}: unexpected results columns {reader.fieldnames}")
        for row in reader:
            results.entries.append(
                ProbeEntry(
                    task=TaskKind(row["task"]),
                    layer=int(row["layer"]),
                    train_size=int(row["train_size"]),
                    seed=int(row["seed"]),
                    train_accuracy=float(row["train_acc"]),
                    test_accuracy=float(row["test_acc"]),
                )
            )
    return results
