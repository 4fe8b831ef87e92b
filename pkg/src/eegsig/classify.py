"""From-scratch classifier suite: MLP, one-vs-rest linear SVM, and k-NN.

All three train deterministically from a seed, share a feature standardizer
fitted on training rows only, and are bundled (model + standardizer) into a
TrainedClassifier that can be saved and reloaded as versioned JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .features import FeatureMatrix

MODEL_FORMAT_VERSION = 1

DEFAULT_HYPERPARAMETERS = {
    "knn": {"k": 5},
    "svm": {"lambda_": 1e-3, "epochs": 50},
    "mlp": {"hidden": 20, "learning_rate": 0.01, "epochs": 500, "batch_size": 16},
}


@dataclass(frozen=True)
class Standardizer:
    """Per-feature affine transform (x - mean) / std fitted on training rows."""

    means: np.ndarray
    stds: np.ndarray
    constant_columns: np.ndarray

    def transform(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return (x - self.means) / self.stds


def fit_standardizer(train: FeatureMatrix | np.ndarray) -> Standardizer:
    values = train.values if isinstance(train, FeatureMatrix) else np.asarray(train)
    if values.size == 0 or values.shape[0] < 1:
        raise ValueError("cannot standardize an empty matrix")
    means = values.mean(axis=0)
    stds = values.std(axis=0)  # population
    constant = stds == 0.0
    stds = np.where(constant, 1.0, stds)
    return Standardizer(means, stds, constant)


# ---------------------------------------------------------------------------
# k-nearest neighbors


@dataclass(frozen=True)
class KnnModel:
    train_values: np.ndarray
    train_labels: np.ndarray
    k: int
    n_classes: int


def train_knn(values: np.ndarray, labels: np.ndarray, k: int = 5) -> KnnModel:
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if k < 1 or k > len(values):
        raise ValueError(f"k={k} out of range for {len(values)} training rows")
    return KnnModel(values, labels, k, int(labels.max()) + 1)


def predict_knn(m: KnnModel, rows: np.ndarray) -> np.ndarray:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if rows.shape[1] != m.train_values.shape[1]:
        raise ValueError(f"query has {rows.shape[1]} features, model expects "
                         f"{m.train_values.shape[1]}")
    out = np.empty(len(rows), dtype=np.int64)
    for i, q in enumerate(rows):
        d = np.sqrt(np.sum((m.train_values - q) ** 2, axis=1))
        # sort by distance, then training index, so ties are deterministic
        order = np.lexsort((np.arange(len(d)), d))[: m.k]
        votes = m.train_labels[order]
        counts = np.bincount(votes, minlength=m.n_classes)
        best = np.flatnonzero(counts == counts.max())
        if len(best) == 1:
            out[i] = best[0]
            continue
        # tie: smaller summed distance wins, then the lower label id
        sums = {lab: d[order[votes == lab]].sum() for lab in best}
        out[i] = min(best, key=lambda lab: (sums[lab], lab))
    return out


# ---------------------------------------------------------------------------
# one-vs-rest linear SVM (primal hinge-loss subgradient descent)


@dataclass(frozen=True)
class SvmModel:
    weights: np.ndarray  # (classes, features)
    biases: np.ndarray  # (classes,)
    lambda_: float
    epochs: int
    seed: int
    n_classes: int


def train_svm(values: np.ndarray, labels: np.ndarray, lambda_: float = 1e-3,
              epochs: int = 50, seed: int = 0) -> SvmModel:
    """One hinge-loss hyperplane per class with a 1/(lambda*t) step schedule.

    Rows are visited in a fresh seeded shuffle each epoch; the bias is updated
    on margin violations but never regularized.
    """
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if lambda_ <= 0 or epochs < 1:
        raise ValueError("lambda_ must be > 0 and epochs >= 1")
    classes = np.unique(labels)
    if len(classes) < 2:
        raise ValueError("need at least 2 classes to train a discriminant")
    n_classes = int(labels.max()) + 1
    n, d = values.shape
    weights = np.zeros((n_classes, d))
    biases = np.zeros(n_classes)
    for c in range(n_classes):
        y = np.where(labels == c, 1.0, -1.0)
        rng = np.random.default_rng([seed, c])
        w = np.zeros(d)
        b = 0.0
        t = 0
        for _ in range(epochs):
            for i in rng.permutation(n):
                t += 1
                eta = 1.0 / (lambda_ * t)
                if y[i] * (values[i] @ w + b) < 1.0:
                    w = (1.0 - eta * lambda_) * w + eta * y[i] * values[i]
                    b += eta * y[i]
                else:
                    w = (1.0 - eta * lambda_) * w
        weights[c] = w
        biases[c] = b
    return SvmModel(weights, biases, lambda_, epochs, seed, n_classes)


def svm_scores(m: SvmModel, rows: np.ndarray) -> np.ndarray:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if rows.shape[1] != m.weights.shape[1]:
        raise ValueError(f"query has {rows.shape[1]} features, model expects "
                         f"{m.weights.shape[1]}")
    return rows @ m.weights.T + m.biases


def predict_svm(m: SvmModel, rows: np.ndarray) -> np.ndarray:
    return np.argmax(svm_scores(m, rows), axis=1).astype(np.int64)


# ---------------------------------------------------------------------------
# multilayer perceptron: tanh hidden layer, softmax output


@dataclass
class MlpModel:
    layer_sizes: tuple[int, int, int]
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    seed: int
    loss_curve: tuple[float, ...] = ()

    @property
    def n_classes(self) -> int:
        return self.layer_sizes[2]


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _mlp_forward(m: MlpModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hidden = np.tanh(x @ m.w1 + m.b1)
    probs = _softmax(hidden @ m.w2 + m.b2)
    return hidden, probs


def _cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    picked = probs[np.arange(len(labels)), labels]
    return float(-np.mean(np.log(np.maximum(picked, 1e-300))))


def _mlp_gradients(m: MlpModel, x: np.ndarray, labels: np.ndarray):
    """Analytic gradients of the mean cross-entropy over the batch."""
    n = len(x)
    hidden, probs = _mlp_forward(m, x)
    delta_out = probs.copy()
    delta_out[np.arange(n), labels] -= 1.0
    delta_out /= n
    gw2 = hidden.T @ delta_out
    gb2 = delta_out.sum(axis=0)
    delta_hidden = (delta_out @ m.w2.T) * (1.0 - hidden ** 2)
    gw1 = x.T @ delta_hidden
    gb1 = delta_hidden.sum(axis=0)
    return gw1, gb1, gw2, gb2


def init_mlp(n_features: int, hidden: int, n_classes: int, seed: int = 0) -> MlpModel:
    rng = np.random.default_rng(seed)
    lim1 = 1.0 / math.sqrt(n_features)
    lim2 = 1.0 / math.sqrt(hidden)
    return MlpModel(
        (n_features, hidden, n_classes),
        rng.uniform(-lim1, lim1, size=(n_features, hidden)),
        np.zeros(hidden),
        rng.uniform(-lim2, lim2, size=(hidden, n_classes)),
        np.zeros(n_classes),
        seed,
    )


def train_mlp(values: np.ndarray, labels: np.ndarray, hidden: int = 20,
              learning_rate: float = 0.01, epochs: int = 500,
              batch_size: int = 16, seed: int = 0) -> MlpModel:
    """Mini-batch gradient descent on softmax cross-entropy.

    Records the full-training-set loss after every epoch in ``loss_curve``.
    epochs=0 returns the untouched seeded initialization.
    """
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if hidden < 1:
        raise ValueError("need at least one hidden unit")
    if learning_rate <= 0 or batch_size < 1 or epochs < 0:
        raise ValueError("bad hyperparameters: learning_rate > 0, batch_size >= 1, "
                         "epochs >= 0 required")
    if len(np.unique(labels)) < 2:
        raise ValueError("need at least 2 classes to train a classifier")
    n, d = values.shape
    n_classes = int(labels.max()) + 1
    model = init_mlp(d, hidden, n_classes, seed)
    rng = np.random.default_rng([seed, 1])
    losses = []
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            batch = order[start:start + batch_size]
            gw1, gb1, gw2, gb2 = _mlp_gradients(model, values[batch], labels[batch])
            model.w1 = model.w1 - learning_rate * gw1
            model.b1 = model.b1 - learning_rate * gb1
            model.w2 = model.w2 - learning_rate * gw2
            model.b2 = model.b2 - learning_rate * gb2
        _, probs = _mlp_forward(model, values)
        losses.append(_cross_entropy(probs, labels))
    model.loss_curve = tuple(losses)
    return model


def predict_mlp(m: MlpModel, rows: np.ndarray) -> np.ndarray:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if rows.shape[1] != m.layer_sizes[0]:
        raise ValueError(f"query has {rows.shape[1]} features, model expects "
                         f"{m.layer_sizes[0]}")
    _, probs = _mlp_forward(m, rows)
    return np.argmax(probs, axis=1).astype(np.int64)


def mlp_gradient_check(m: MlpModel, x: np.ndarray, labels: np.ndarray,
                       epsilon: float = 1e-5) -> float:
    """Max relative error between analytic and central-difference gradients."""
    x = np.asarray(x, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    analytic = _mlp_gradients(m, x, labels)
    params = [m.w1, m.b1, m.w2, m.b2]
    worst = 0.0
    for grad, param in zip(analytic, params):
        flat = param.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + epsilon
            _, probs = _mlp_forward(m, x)
            hi = _cross_entropy(probs, labels)
            flat[i] = orig - epsilon
            _, probs = _mlp_forward(m, x)
            lo = _cross_entropy(probs, labels)
            flat[i] = orig
            numeric = (hi - lo) / (2.0 * epsilon)
            a = grad.reshape(-1)[i]
            scale = max(abs(a), abs(numeric), 1e-8)
            worst = max(worst, abs(a - numeric) / scale)
    return worst


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    confusion: np.ndarray  # (K, K); rows true, columns predicted
    per_class_recall: np.ndarray

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "confusion": self.confusion.tolist(),
            "per_class_recall": self.per_class_recall.tolist(),
        }


def evaluate(pred, truth, n_classes: int) -> Metrics:
    pred = np.asarray(pred, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if len(pred) != len(truth):
        raise ValueError(f"{len(pred)} predictions for {len(truth)} truths")
    if len(pred) == 0:
        raise ValueError("nothing to evaluate")
    if pred.max(initial=0) >= n_classes or truth.max(initial=0) >= n_classes:
        raise ValueError(f"label outside 0..{n_classes - 1}")
    if pred.min(initial=0) < 0 or truth.min(initial=0) < 0:
        raise ValueError("negative label")
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(confusion, (truth, pred), 1)
    accuracy = float(np.trace(confusion) / confusion.sum())
    row_sums = confusion.sum(axis=1)
    recall = np.where(row_sums > 0, np.diag(confusion) / np.maximum(row_sums, 1), 0.0)
    return Metrics(accuracy, confusion, recall)


def kfold_split(n: int, folds: int, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Seeded shuffle then contiguous folds; every index lands in exactly one
    test fold."""
    if not (2 <= folds <= n):
        raise ValueError(f"folds={folds} out of range for n={n}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    sizes = np.full(folds, n // folds)
    sizes[: n % folds] += 1
    splits = []
    start = 0
    for size in sizes:
        test = order[start:start + size]
        train = np.concatenate([order[:start], order[start + size:]])
        splits.append((np.sort(train), np.sort(test)))
        start += size
    return splits


# ---------------------------------------------------------------------------
# bundled classifier: standardizer + fitted model


@dataclass(frozen=True)
class TrainedClassifier:
    """A fitted model plus the standardization used at fit time."""

    kind: str
    model: Any
    standardizer: Standardizer
    feature_names: tuple[str, ...]
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    @property
    def n_classes(self) -> int:
        return self.model.n_classes

    def predict(self, rows: np.ndarray) -> np.ndarray:
        z = self.standardizer.transform(np.atleast_2d(rows))
        if self.kind == "knn":
            return predict_knn(self.model, z)
        if self.kind == "svm":
            return predict_svm(self.model, z)
        if self.kind == "mlp":
            return predict_mlp(self.model, z)
        raise ValueError(f"unknown classifier kind {self.kind!r}")


def fit_classifier(train: FeatureMatrix, kind: str,
                   hyperparameters: dict | None = None,
                   seed: int = 0) -> TrainedClassifier:
    """Standardize the training matrix, then fit the requested model."""
    if kind not in DEFAULT_HYPERPARAMETERS:
        raise ValueError(f"unknown classifier kind {kind!r}; "
                         f"choose from {sorted(DEFAULT_HYPERPARAMETERS)}")
    hyper = dict(DEFAULT_HYPERPARAMETERS[kind])
    hyper.update(hyperparameters or {})
    standardizer = fit_standardizer(train)
    z = standardizer.transform(train.values)
    if kind == "knn":
        model = train_knn(z, train.labels, k=int(hyper["k"]))
    elif kind == "svm":
        model = train_svm(z, train.labels, lambda_=float(hyper["lambda_"]),
                          epochs=int(hyper["epochs"]), seed=seed)
    else:
        model = train_mlp(z, train.labels, hidden=int(hyper["hidden"]),
                          learning_rate=float(hyper["learning_rate"]),
                          epochs=int(hyper["epochs"]),
                          batch_size=int(hyper["batch_size"]), seed=seed)
    return TrainedClassifier(kind, model, standardizer, train.feature_names,
                             hyper, seed)


def cross_validate(fm: FeatureMatrix, kind: str, hyperparameters: dict | None,
                   folds: int, seed: int = 0) -> dict:
    """Retrain per fold; returns per-fold and mean test accuracy."""
    splits = kfold_split(fm.n_rows, folds, seed)
    accuracies = []
    for train_idx, test_idx in splits:
        clf = fit_classifier(fm.select_rows(train_idx), kind, hyperparameters, seed)
        pred = clf.predict(fm.values[test_idx])
        metrics = evaluate(pred, fm.labels[test_idx], clf.n_classes)
        accuracies.append(metrics.accuracy)
    return {
        "folds": folds,
        "fold_accuracies": accuracies,
        "mean_accuracy": float(np.mean(accuracies)),
    }


# ---------------------------------------------------------------------------
# model persistence (versioned JSON)


def save_classifier(clf: TrainedClassifier, path: str | Path) -> Path:
    path = Path(path)
    doc: dict[str, Any] = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": clf.kind,
        "seed": clf.seed,
        "hyperparameters": clf.hyperparameters,
        "feature_names": list(clf.feature_names),
        "standardizer": {
            "means": clf.standardizer.means.tolist(),
            "stds": clf.standardizer.stds.tolist(),
            "constant_columns": clf.standardizer.constant_columns.tolist(),
        },
    }
    m = clf.model
    if clf.kind == "knn":
        doc["model"] = {
            "k": m.k,
            "n_classes": m.n_classes,
            "train_values": m.train_values.tolist(),
            "train_labels": m.train_labels.tolist(),
        }
    elif clf.kind == "svm":
        doc["model"] = {
            "weights": m.weights.tolist(),
            "biases": m.biases.tolist(),
            "lambda_": m.lambda_,
            "epochs": m.epochs,
            "n_classes": m.n_classes,
        }
    elif clf.kind == "mlp":
        doc["model"] = {
            "layer_sizes": list(m.layer_sizes),
            "w1": m.w1.tolist(),
            "b1": m.b1.tolist(),
            "w2": m.w2.tolist(),
            "b2": m.b2.tolist(),
            "loss_curve": list(m.loss_curve),
        }
    else:
        raise ValueError(f"unknown classifier kind {clf.kind!r}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc) + "\n")
    return path


def load_classifier(path: str | Path) -> TrainedClassifier:
    doc = json.loads(Path(path).read_text())
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {version!r}")
    kind = doc["kind"]
    std = Standardizer(
        np.array(doc["standardizer"]["means"], dtype=np.float64),
        np.array(doc["standardizer"]["stds"], dtype=np.float64),
        np.array(doc["standardizer"]["constant_columns"], dtype=bool),
    )
    m = doc["model"]
    if kind == "knn":
        model: Any = KnnModel(
            np.array(m["train_values"], dtype=np.float64).reshape(
                len(m["train_labels"]), -1),
            np.array(m["train_labels"], dtype=np.int64),
            int(m["k"]), int(m["n_classes"]),
        )
    elif kind == "svm":
        model = SvmModel(
            np.array(m["weights"], dtype=np.float64),
            np.array(m["biases"], dtype=np.float64),
            float(m["lambda_"]), int(m["epochs"]), int(doc["seed"]),
            int(m["n_classes"]),
        )
    elif kind == "mlp":
        model = MlpModel(
            tuple(m["layer_sizes"]),
            np.array(m["w1"], dtype=np.float64),
            np.array(m["b1"], dtype=np.float64),
            np.array(m["w2"], dtype=np.float64),
            np.array(m["b2"], dtype=np.float64),
            int(doc["seed"]),
            tuple(m.get("loss_curve", ())),
        )
    else:
        raise ValueError(f"unknown classifier kind {kind!r}")
    return TrainedClassifier(kind, model, std, tuple(doc["feature_names"]),
                             doc.get("hyperparameters", {}), int(doc["seed"]))
