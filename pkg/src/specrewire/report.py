"""Rewiring sweeps, trend labels, spectrum categories and runtime benchmarks."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError
from .gcn import Dataset, Hyperparams, make_splits, propagation_matrix, train, average_ranks
from .graph import Graph
from .rewire import RewireConfig
from .spectral import DEFAULT_SIZE_CAP, laplacian_spectrum

SCHEMA_VERSION = 1
SLOPE_TOL = 1e-6
INCREASING, DECREASING, FLAT = "Increasing", "Decreasing", "Flat"
MODES = ("self_loop", "parallel_edge")

CATEGORY_TABLE = {
    (INCREASING, INCREASING): "A",
    (INCREASING, DECREASING): "B",
    (DECREASING, INCREASING): "C",
    (DECREASING, DECREASING): "D",
}

# Fixed reading of each category; not computed from data.
CATEGORY_NOTES = {
    "A": "Spectrum roughly symmetric about 1 with balanced low/high frequency counts; "
    "typical of graphs with many isolated nodes or weakly connected components.",
    "B": "Spectrum centred near 1 with near-equal low/high counts; moderate density and "
    "average degree, few isolated nodes. Extra parallel edges push out the remaining "
    "low frequencies.",
    "C": "Spectrum skewed towards high frequencies; dense, strongly connected graph with "
    "no or few isolated nodes. Self-loops crowd eigenvalues around 1.",
    "D": "Many zero eigenvalues and few nonzero frequencies; sparse graph with low average "
    "degree and many isolated nodes.",
    "Undetermined": "At least one sweep showed no clear trend (slope within tolerance); "
    "no category assigned.",
}


def config_for(mode: str, k: float) -> RewireConfig:
    """Sweep step ``k``: ``A + k I`` for self-loops, ``k A + I`` for parallel edges."""
    if mode == "self_loop":
        return RewireConfig.self_loops(k)
    if mode == "parallel_edge":
        return RewireConfig.parallel_edges(k)
    raise ValidationError(f"unknown mode {mode!r}")


def _slope(k, y) -> float:
    k = np.asarray(k, dtype=float)
    y = np.asarray(y, dtype=float)
    kc = k - k.mean()
    return float(kc @ (y - y.mean()) / (kc @ kc))


def spearman(x, y) -> float | None:
    rx, ry = average_ranks(x), average_ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    denom = float(np.sqrt((rx @ rx) * (ry @ ry)))
    return None if denom == 0.0 else float(rx @ ry / denom)


def classify_trend(series, slope_tol: float = SLOPE_TOL) -> str:
    """Label a ``[(k, mean), ...]`` series (or plain means over k = 1..n) by its
    least-squares slope."""
    k, y = _split_series(series)
    s = _slope(k, y)
    if s > slope_tol:
        return INCREASING
    if s < -slope_tol:
        return DECREASING
    return FLAT


def _split_series(series) -> tuple[list, list]:
    series = list(series)
    if series and np.ndim(series[0]) == 0:
        series = [(i + 1, v) for i, v in enumerate(series)]
    if len(series) < 3:
        raise ValidationError("trend classification needs at least 3 points")
    k = [float(p[0]) for p in series]
    y = [float(p[1]) for p in series]
    if np.any(np.diff(k) <= 0):
        raise ValidationError("sweep steps must be strictly ascending")
    return k, y


@dataclass
class TrendReport:
    mode: str
    steps: list  # [k, mean, std]
    slope: float
    spearman: float | None
    label: str
    metric: str = "accuracy"
    n_splits: int = 1
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "TrendReport":
        obj = dict(obj)
        obj["steps"] = [list(s) for s in obj["steps"]]
        return cls(**obj)


def trend_report(mode: str, steps, metric: str = "accuracy", n_splits: int = 1,
                 slope_tol: float = SLOPE_TOL) -> TrendReport:
    steps = [[float(k), float(m), float(s)] for k, m, s in steps]
    k, y = _split_series([(s[0], s[1]) for s in steps])
    return TrendReport(mode, steps, _slope(k, y), spearman(k, y),
                       classify_trend(list(zip(k, y)), slope_tol), metric, n_splits)


@dataclass
class CategoryReport:
    trend_self_loop: str
    trend_parallel: str
    category: str
    interpretation: str
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "CategoryReport":
        return cls(**obj)


def assign_category(self_loop_label: str, parallel_label: str) -> CategoryReport:
    for lab in (self_loop_label, parallel_label):
        if lab not in (INCREASING, DECREASING, FLAT):
            raise ValidationError(f"unknown trend label {lab!r}")
    cat = CATEGORY_TABLE.get((self_loop_label, parallel_label), "Undetermined")
    return CategoryReport(self_loop_label, parallel_label, cat, CATEGORY_NOTES[cat])


@dataclass(frozen=True)
class SweepConfig:
    hyper: Hyperparams = field(default_factory=Hyperparams)
    n_splits: int = 3
    ratios: tuple = (0.6, 0.2, 0.2)
    seed: int = 0
    metric: str = "accuracy"
    workers: int = 1


def _ensure_splits(dataset: Dataset, conf: SweepConfig) -> Dataset:
    if len(dataset.splits) >= conf.n_splits:
        return dataset
    splits = make_splits(dataset.graph.n, conf.ratios, conf.n_splits, conf.seed, dataset.labels)
    return Dataset(dataset.graph, dataset.features, dataset.labels, splits, conf.seed)


def _run_point(args) -> tuple:
    dataset, cfg, conf, key = args
    A_hat = propagation_matrix(dataset.graph, cfg)
    vals = []
    for s in range(conf.n_splits):
        try:
            res = train(dataset, cfg, conf.hyper, split=s, param_seed=conf.seed + s,
                        dropout_seed=conf.seed + 1000 + s, metric=conf.metric, A_hat=A_hat)
        except NumericalError as exc:
            raise NumericalError(f"alpha={cfg.alpha}, gamma={cfg.gamma}, split {s}: {exc}") from exc
        vals.append(res.test_metric)
    return key, float(np.mean(vals)), float(np.std(vals))


def _run_points(jobs: list, workers: int) -> dict:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_point, jobs))
    else:
        results = [_run_point(j) for j in jobs]
    return {key: (mean, std) for key, mean, std in results}


def run_sweep(dataset: Dataset, mode: str, k_max: int = 5, conf: SweepConfig = SweepConfig()) -> TrendReport:
    """Train on k = 1..k_max rewired copies and label the trend of the mean
    test metric across splits."""
    if k_max < 3:
        raise ValidationError("k_max must be >= 3")
    dataset = _ensure_splits(dataset, conf)
    jobs = [(dataset, config_for(mode, k), conf, k) for k in range(1, k_max + 1)]
    res = _run_points(jobs, conf.workers)
    steps = [(k, *res[k]) for k in range(1, k_max + 1)]
    return trend_report(mode, steps, conf.metric, conf.n_splits)


def run_both(dataset: Dataset, k_max: int = 5, conf: SweepConfig = SweepConfig()):
    sl = run_sweep(dataset, "self_loop", k_max, conf)
    pe = run_sweep(dataset, "parallel_edge", k_max, conf)
    return sl, pe, assign_category(sl.label, pe.label)


@dataclass
class GridReport:
    alphas: list
    parallel_k: list
    mean: list
    std: list
    metric: str = "accuracy"
    schema: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha", "gamma", "parallel_k", "mean", "std"])
        for i, a in enumerate(self.alphas):
            for j, k in enumerate(self.parallel_k):
                w.writerow([a, k - 1, k, repr(self.mean[i][j]), repr(self.std[i][j])])
        return buf.getvalue()


def run_grid(dataset: Dataset, alpha_max: int, gamma_max: int, conf: SweepConfig = SweepConfig()) -> GridReport:
    """Mean metric over ``(gamma + 1) A + alpha I`` for alpha in 1..alpha_max and
    parallel multiplicity k = gamma + 1 in 1..gamma_max.

    Cell (alpha, 1) matches self-loop sweep step alpha and cell (1, k) matches
    parallel-edge sweep step k.
    """
    if alpha_max < 1 or gamma_max < 1:
        raise ValidationError("alpha_max and gamma_max must be >= 1")
    dataset = _ensure_splits(dataset, conf)
    alphas = list(range(1, alpha_max + 1))
    ks = list(range(1, gamma_max + 1))
    jobs = [(dataset, RewireConfig(a, k - 1), conf, (a, k)) for a in alphas for k in ks]
    res = _run_points(jobs, conf.workers)
    mean = [[res[(a, k)][0] for k in ks] for a in alphas]
    std = [[res[(a, k)][1] for k in ks] for a in alphas]
    return GridReport(alphas, ks, mean, std, conf.metric)


@dataclass
class BenchReport:
    n: int
    m: int
    eig_outcome: str
    eig_seconds: float | None
    sweep_outcome: str
    sweep_seconds: float | None
    size_cap: int
    backend: str
    schema: int = SCHEMA_VERSION

    TIMING_FIELDS = ("eig_seconds", "sweep_seconds")

    def to_dict(self) -> dict:
        return asdict(self)


def synthetic_dataset(g: Graph, seed: int = 0, n_features: int = 16, k_classes: int = 2) -> Dataset:
    """Random features and labels on a fixed graph, for timing only."""
    rng = np.random.default_rng([int(seed), 0xBE4C])
    X = rng.standard_normal((g.n, n_features))
    y = np.arange(g.n) % k_classes
    return Dataset(g, X, y, [], seed)


def run_bench(
    graph: Graph,
    dataset: Dataset | None = None,
    k_max: int = 5,
    conf: SweepConfig = SweepConfig(),
    size_cap: int = DEFAULT_SIZE_CAP,
) -> BenchReport:
    """Time a full Laplacian eigendecomposition against the two trend sweeps.

    Failures are recorded as outcomes, not raised.
    """
    from ._backend import BACKEND

    eig_outcome, eig_t = "ok", None
    if graph.n > size_cap:
        eig_outcome = "size_cap_exceeded"
    else:
        t0 = time.perf_counter()
        try:
            laplacian_spectrum(graph, RewireConfig(1.0, 0.0), want_vectors=True, size_cap=size_cap)
            eig_t = time.perf_counter() - t0
        except (ValidationError, NumericalError) as exc:
            eig_outcome = f"failed: {exc}"

    ds = dataset if dataset is not None else synthetic_dataset(graph, conf.seed)
    sweep_outcome, sweep_t = "ok", None
    t0 = time.perf_counter()
    try:
        run_both(ds, k_max, conf)
        sweep_t = time.perf_counter() - t0
    except (ValidationError, NumericalError) as exc:
        sweep_outcome = f"failed: {exc}"
    return BenchReport(graph.n, graph.m, eig_outcome, eig_t, sweep_outcome, sweep_t, size_cap, BACKEND)
