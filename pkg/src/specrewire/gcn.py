"""Two-layer GCN in numpy, trained with Adam on dense propagation matrices.

Architecture: ``Z = A_hat @ dropout(LayerNorm(ReLU(A_hat @ X @ W0))) @ W1``
where ``A_hat`` is the symmetrically normalized adjacency of the rewired
graph.  Loss is masked softmax cross-entropy plus ``0.5 * wd * ||W||^2`` on
both weight matrices.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import TextIO

import numpy as np

from .errors import NumericalError, ValidationError
from .graph import Graph
from .randgraph import gen_planted_partition
from .rewire import RewireConfig, rewire
from .spectral import normalized_adjacency

DIVERGENCE_LOSS = 1e6
LN_EPS = 1e-5


@dataclass(frozen=True)
class Hyperparams:
    hidden: int = 64
    dropout: float = 0.5
    lr: float = 0.01
    weight_decay: float = 5e-4
    epochs: int = 200
    patience: int = 50
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8

    @classmethod
    def from_json(cls, text: str) -> "Hyperparams":
        obj = json.loads(text)
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"unknown hyperparameters: {sorted(unknown)}")
        return cls(**obj)


@dataclass(frozen=True, eq=False)
class Dataset:
    graph: Graph
    features: np.ndarray
    labels: np.ndarray
    splits: list = field(default_factory=list)  # (train, valid, test) boolean masks
    split_seed: int = 0

    def __post_init__(self):
        n = self.graph.n
        if self.features.ndim != 2 or self.features.shape[0] != n:
            raise ValidationError(f"features must be an {n} x d matrix")
        if self.labels.shape != (n,):
            raise ValidationError(f"labels must have length {n}")
        if self.labels.size and self.labels.min() < 0:
            raise ValidationError("labels must be nonnegative class ids")

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0


def load_features_csv(stream: TextIO | str) -> np.ndarray:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    rows = []
    for lineno, row in enumerate(csv.reader(stream), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            rows.append([float(c) for c in row])
        except ValueError:
            raise ValidationError(f"features line {lineno}: non-numeric value") from None
    if rows and len({len(r) for r in rows}) != 1:
        raise ValidationError("feature rows have different lengths")
    return np.array(rows, dtype=float)


def load_labels_csv(stream: TextIO | str) -> np.ndarray:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    out = []
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            out.append(int(line))
        except ValueError:
            raise ValidationError(f"labels line {lineno}: expected an integer") from None
    return np.array(out, dtype=np.int64)


def make_splits(n: int, ratios=(0.6, 0.2, 0.2), n_splits: int = 1, seed: int = 0, labels=None) -> list:
    """Seeded train/valid/test masks.

    Sizes use floor rounding; when the ratios sum to one the remainder goes to
    the test set.  With ``labels`` given, a split is redrawn (up to 100 times)
    until every class appears in the training mask.
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r < 0 for r in ratios) or sum(ratios) > 1 + 1e-9:
        raise ValidationError("ratios must be three nonnegative numbers summing to at most 1")
    if n_splits < 1:
        raise ValidationError("n_splits must be >= 1")
    n_train = int(math.floor(ratios[0] * n + 1e-9))
    n_valid = int(math.floor(ratios[1] * n + 1e-9))
    if abs(sum(ratios) - 1.0) <= 1e-9:
        n_test = n - n_train - n_valid
    else:
        n_test = int(math.floor(ratios[2] * n + 1e-9))
    classes = None if labels is None else np.unique(labels)

    splits = []
    for s in range(n_splits):
        rng = np.random.default_rng([int(seed), s])
        for _ in range(100):
            perm = rng.permutation(n)
            train = np.zeros(n, dtype=bool)
            valid = np.zeros(n, dtype=bool)
            test = np.zeros(n, dtype=bool)
            train[perm[:n_train]] = True
            valid[perm[n_train : n_train + n_valid]] = True
            test[perm[n_train + n_valid : n_train + n_valid + n_test]] = True
            if classes is None or np.array_equal(np.unique(labels[train]), classes):
                break
        else:
            raise ValidationError("could not draw a split with every class in the training set")
        splits.append((train, valid, test))
    return splits


def planted_dataset(
    n: int = 40,
    k_classes: int = 2,
    p_in: float = 0.9,
    p_out: float = 0.05,
    seed: int = 0,
    n_features: int = 16,
    signal: float = 1.0,
    ratios=(0.6, 0.2, 0.2),
    n_splits: int = 1,
) -> Dataset:
    """Planted-partition graph with noisy Gaussian class-centroid features."""
    g, labels = gen_planted_partition(n, k_classes, p_in, p_out, seed)
    rng = np.random.default_rng([int(seed), 0xFEA7])
    centers = rng.standard_normal((k_classes, n_features)) * signal / math.sqrt(n_features)
    X = centers[labels] + rng.standard_normal((n, n_features)) / math.sqrt(n_features)
    splits = make_splits(n, ratios, n_splits, seed, labels)
    return Dataset(g, X, labels, splits, seed)


def propagation_matrix(g: Graph, cfg: RewireConfig) -> np.ndarray:
    return normalized_adjacency(rewire(g, cfg))


@dataclass(eq=False)
class GcnModel:
    W0: np.ndarray
    W1: np.ndarray
    ln_gain: np.ndarray
    ln_bias: np.ndarray
    hyper: Hyperparams = field(default_factory=Hyperparams)
    param_seed: int = 0

    PARAMS = ("W0", "W1", "ln_gain", "ln_bias")

    @classmethod
    def init(cls, d: int, c: int, hyper: Hyperparams = Hyperparams(), param_seed: int = 0) -> "GcnModel":
        """Glorot-uniform weights, unit gain, zero bias."""
        rng = np.random.default_rng([int(param_seed), 0x6C1])
        h = hyper.hidden

        def glorot(a, b):
            lim = math.sqrt(6.0 / (a + b))
            return rng.uniform(-lim, lim, size=(a, b))

        return cls(glorot(d, h), glorot(h, c), np.ones(h), np.zeros(h), hyper, param_seed)

    def params(self) -> dict:
        return {k: getattr(self, k) for k in self.PARAMS}

    def copy(self) -> "GcnModel":
        return replace(self, **{k: v.copy() for k, v in self.params().items()})


def _dropout_mask(rng: np.random.Generator, shape, rate: float) -> np.ndarray:
    if rate <= 0.0:
        return np.ones(shape)
    return (rng.random(shape) >= rate) / (1.0 - rate)


def _forward(model: GcnModel, A_hat, X, mask=None):
    P = A_hat @ X
    S = P @ model.W0
    R = np.maximum(S, 0.0)
    mu = R.mean(axis=1, keepdims=True)
    var = R.var(axis=1, keepdims=True)
    inv = 1.0 / np.sqrt(var + LN_EPS)
    xhat = (R - mu) * inv
    H = xhat * model.ln_gain + model.ln_bias
    Hd = H if mask is None else H * mask
    Q = A_hat @ Hd
    Z = Q @ model.W1
    return Z, (P, S, xhat, inv, H, Hd, Q)


def forward(model: GcnModel, A_hat, X, train_mode: bool = False, rng=None, mask=None) -> np.ndarray:
    """Class scores for every node; dropout is applied only in ``train_mode``."""
    A_hat = np.asarray(A_hat, dtype=float)
    X = np.asarray(X, dtype=float)
    if A_hat.shape != (X.shape[0], X.shape[0]) or X.shape[1] != model.W0.shape[0]:
        raise ValidationError("shape mismatch between propagation matrix, features and model")
    if train_mode and mask is None:
        rng = rng if rng is not None else np.random.default_rng(0)
        mask = _dropout_mask(rng, (X.shape[0], model.W0.shape[1]), model.hyper.dropout)
    return _forward(model, A_hat, X, mask if train_mode else None)[0]


def _log_softmax(Z):
    Zs = Z - Z.max(axis=1, keepdims=True)
    return Zs - np.log(np.exp(Zs).sum(axis=1, keepdims=True))


def loss_and_grads(model: GcnModel, A_hat, X, y, train_mask, mask=None) -> tuple[float, dict]:
    """Masked mean cross-entropy + L2 penalty, and its exact gradients.

    ``mask`` is a precomputed (already rescaled) dropout mask for the hidden
    layer, or ``None`` for no dropout.
    """
    train_mask = np.asarray(train_mask, dtype=bool)
    m = int(train_mask.sum())
    if m == 0:
        raise ValidationError("training mask selects no nodes")
    Z, (P, S, xhat, inv, H, Hd, Q) = _forward(model, A_hat, X, mask)
    logp = _log_softmax(Z)
    idx = np.flatnonzero(train_mask)
    wd = model.hyper.weight_decay
    ce = -float(logp[idx, y[idx]].mean())
    loss = ce + 0.5 * wd * (float(np.sum(model.W0**2)) + float(np.sum(model.W1**2)))
    if not math.isfinite(loss):
        raise NumericalError("loss is not finite")

    dZ = np.zeros_like(Z)
    dZ[idx] = np.exp(logp[idx])
    dZ[idx, y[idx]] -= 1.0
    dZ /= m
    dW1 = Q.T @ dZ + wd * model.W1
    dHd = A_hat.T @ (dZ @ model.W1.T)
    dH = dHd if mask is None else dHd * mask
    dgain = np.sum(dH * xhat, axis=0)
    dbias = np.sum(dH, axis=0)
    dxhat = dH * model.ln_gain
    dR = inv * (dxhat - dxhat.mean(axis=1, keepdims=True) - xhat * (dxhat * xhat).mean(axis=1, keepdims=True))
    dS = dR * (S > 0)
    dW0 = P.T @ dS + wd * model.W0
    return loss, {"W0": dW0, "W1": dW1, "ln_gain": dgain, "ln_bias": dbias}


def accuracy(scores, labels) -> float:
    return float(np.mean(np.argmax(scores, axis=1) == labels))


def average_ranks(x) -> np.ndarray:
    """1-based ranks with ties sharing their mean rank."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="mergesort")
    xs = x[order]
    ranks = np.empty(x.shape[0])
    i = 0
    while i < xs.shape[0]:
        j = i
        while j + 1 < xs.shape[0] and xs[j + 1] == xs[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def roc_auc(scores, labels) -> float:
    """Mann-Whitney AUC; tied positive/negative pairs count one half."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = int(labels.shape[0] - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("roc_auc needs both classes present")
    r = average_ranks(scores)
    return float((r[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def _metric(kind: str, Z, y, sel) -> float:
    if kind == "accuracy":
        return accuracy(Z[sel], y[sel])
    logp = _log_softmax(Z)
    return roc_auc(logp[sel, 1] - logp[sel, 0], y[sel])


@dataclass
class TrainResult:
    metric: str
    train_loss: list
    valid_metric: list
    best_epoch: int
    best_valid: float
    test_metric: float

    def to_dict(self) -> dict:
        return asdict(self)


class _Adam:
    def __init__(self, params: dict, hyper: Hyperparams):
        self.h = hyper
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: dict, grads: dict) -> None:
        h = self.h
        self.t += 1
        c1 = 1.0 - h.beta1**self.t
        c2 = 1.0 - h.beta2**self.t
        for k, p in params.items():
            g = grads[k]
            self.m[k] = h.beta1 * self.m[k] + (1 - h.beta1) * g
            self.v[k] = h.beta2 * self.v[k] + (1 - h.beta2) * g * g
            p -= h.lr * (self.m[k] / c1) / (np.sqrt(self.v[k] / c2) + h.adam_eps)


def train(
    dataset: Dataset,
    cfg: RewireConfig = RewireConfig(1.0, 0.0),
    hyper: Hyperparams = Hyperparams(),
    split: int = 0,
    param_seed: int = 0,
    dropout_seed: int = 0,
    metric: str = "accuracy",
    A_hat: np.ndarray | None = None,
) -> TrainResult:
    """Full-batch Adam training with early stopping on the validation metric."""
    if metric not in ("accuracy", "roc_auc"):
        raise ValidationError(f"unknown metric {metric!r}")
    if not dataset.splits:
        raise ValidationError("dataset has no splits")
    train_m, valid_m, test_m = dataset.splits[split]
    if A_hat is None:
        A_hat = propagation_matrix(dataset.graph, cfg)
    X, y = dataset.features, dataset.labels
    c = max(dataset.n_classes, 2)
    model = GcnModel.init(X.shape[1], c, hyper, param_seed)
    opt = _Adam(model.params(), hyper)
    rng = np.random.default_rng([int(dropout_seed), 0xD80])

    losses, valids = [], []
    best = (-math.inf, -1, math.nan)
    since_best = 0
    for epoch in range(hyper.epochs):
        mask = _dropout_mask(rng, (X.shape[0], hyper.hidden), hyper.dropout)
        try:
            loss, grads = loss_and_grads(model, A_hat, X, y, train_m, mask)
        except NumericalError as exc:
            raise NumericalError(f"epoch {epoch}: {exc}") from exc
        if loss > DIVERGENCE_LOSS:
            raise NumericalError(f"epoch {epoch}: training diverged (loss {loss:.3g})")
        opt.step(model.params(), grads)
        Z = _forward(model, A_hat, X)[0]
        v = _metric(metric, Z, y, valid_m)
        losses.append(loss)
        valids.append(v)
        if v > best[0]:
            best = (v, epoch, _metric(metric, Z, y, test_m))
            since_best = 0
        else:
            since_best += 1
            if since_best >= hyper.patience:
                break
    return TrainResult(metric, losses, valids, best[1], best[0], best[2])


def train_logistic(dataset: Dataset, hyper: Hyperparams = Hyperparams(), split: int = 0, param_seed: int = 0) -> float:
    """Graph-blind softmax regression on the features; returns test accuracy at
    the best validation epoch."""
    train_m, valid_m, test_m = dataset.splits[split]
    X, y = dataset.features, dataset.labels
    c = max(dataset.n_classes, 2)
    rng = np.random.default_rng([int(param_seed), 0x106])
    W = rng.uniform(-0.1, 0.1, size=(X.shape[1], c))
    b = np.zeros(c)
    opt = _Adam({"W": W, "b": b}, hyper)
    idx = np.flatnonzero(train_m)
    best = (-math.inf, math.nan)
    for _ in range(hyper.epochs):
        logp = _log_softmax(X @ W + b)
        dZ = np.zeros_like(logp)
        dZ[idx] = np.exp(logp[idx])
        dZ[idx, y[idx]] -= 1.0
        dZ /= idx.size
        opt.step({"W": W, "b": b}, {"W": X.T @ dZ + hyper.weight_decay * W, "b": dZ.sum(axis=0)})
        Z = X @ W + b
        v = accuracy(Z[valid_m], y[valid_m])
        if v > best[0]:
            best = (v, accuracy(Z[test_m], y[test_m]))
    return best[1]
