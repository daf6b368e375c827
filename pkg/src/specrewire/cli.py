"""Command-line entry point: ``specrewire <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure (or a failed
check under ``verify --strict``).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


from . import __version__
from .errors import NumericalError, ValidationError
from .gcn import Dataset, Hyperparams, load_features_csv, load_labels_csv, make_splits, planted_dataset
from .graph import compute_metrics, connected_components, dump_edge_list, load_edge_list
from .randgraph import gen_erdos_renyi, gen_planted_partition, gen_regular_circulant
from .report import SCHEMA_VERSION, SweepConfig, run_bench, run_both, run_grid, run_sweep
from .rewire import RewireConfig, rewire
from .spectral import DEFAULT_BINS, DEFAULT_SIZE_CAP, ZERO_TOL, adjacency_spectrum, laplacian_spectrum, spectrum_stats
from . import verify as V

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def _emit(args, payload, text: str | None = None) -> None:
    """Write ``text`` if given, else ``payload`` as canonical JSON."""
    if text is None:
        if isinstance(payload, dict):
            payload = {"schema": SCHEMA_VERSION, **payload}
        text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _clean(obj):
    """Replace NaN with None so output stays strict JSON."""
    if isinstance(obj, float) and obj != obj:
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    return obj


def _multiplicity(value: str, allow_real: bool, name: str) -> float:
    x = float(value)
    if not allow_real and not x.is_integer():
        raise ValidationError(f"{name} must be an integer (use --allow-real for real values)")
    return x


def _read_graph(path: str | None, n_hint: int | None = None):
    if path is None:
        raise ValidationError("--graph is required")
    if path == "-":
        return load_edge_list(sys.stdin, n_hint)
    try:
        with open(path, encoding="utf-8") as fh:
            return load_edge_list(fh, n_hint)
    except FileNotFoundError:
        raise ValidationError(f"no such file: {path}") from None


def _csv_ints(text: str, count: int | None = None) -> list[float]:
    parts = [p for p in text.split(",") if p.strip()]
    if count is not None and len(parts) != count:
        raise ValidationError(f"expected {count} comma-separated values, got {text!r}")
    return [float(p) for p in parts]


def _cfg(args) -> RewireConfig:
    allow = getattr(args, "allow_real", False)
    return RewireConfig(
        _multiplicity(args.self_loops, allow, "--self-loops"),
        _multiplicity(args.parallel_edges, allow, "--parallel-edges"),
    )


def cmd_stats(args) -> int:
    g = _read_graph(args.graph, args.n)
    met = compute_metrics(g, args.epsilon).to_dict()
    _, ncomp = connected_components(g)
    met["components"] = ncomp
    _emit(args, met)
    return EXIT_OK


def cmd_rewire(args) -> int:
    g = _read_graph(args.graph, args.n)
    h = rewire(g, _cfg(args))
    if args.format == "json":
        _emit(args, {"n": h.n, "edges": [list(e) for e in h.edges()],
                     "loop_weight": [float(x) for x in h.loop_weight]})
    else:
        _emit(args, None, dump_edge_list(h))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    g = _read_graph(args.graph, args.n)
    cfg = _cfg(args)
    fn = laplacian_spectrum if args.operator == "laplacian" else adjacency_spectrum
    s = fn(g, cfg, size_cap=args.size_cap)
    if args.operator == "laplacian":
        st = spectrum_stats(s, args.tol, args.bins)
        if args.format == "csv":
            _emit(args, None, st.histogram_csv())
            return EXIT_OK
        _emit(args, {**s.to_json(), "stats": st.to_dict()})
    else:
        if args.format == "csv":
            raise ValidationError("histogram CSV is only defined for the Laplacian")
        _emit(args, s.to_json())
    return EXIT_OK


def _params(text: str) -> list[float]:
    if ".." in text:
        lo, hi = text.split("..")
        return [float(x) for x in range(int(lo), int(hi) + 1)]
    return _csv_ints(text)


def _verify_one(kind: str, g, args) -> dict:
    alphas, gammas = _params(args.alphas), _params(args.gammas)
    if kind == "bounds":
        out = [V.verify_lemma_bounds(g, alpha=a).to_dict() for a in alphas]
        out += [V.verify_lemma_bounds(g, gamma=c).to_dict() for c in gammas]
        ok = all(r["holds"] and r["delta1_holds"] and r["deltan_holds"] for r in out)
    elif kind == "range":
        out = [V.verify_range_regular(g, alpha=a).to_dict() for a in alphas]
        out += [V.verify_range_regular(g, gamma=c).to_dict() for c in gammas]
        ok = all(r["passed"] for r in out)
    elif kind == "monotone":
        out = [V.verify_monotonicity(g, alphas=alphas).to_dict(),
               V.verify_monotonicity(g, gammas=gammas).to_dict()]
        ok = all(r["passed"] for r in out)
    elif kind == "corollary":
        out = [V.verify_corollary(g, a, c).to_dict() for a in alphas for c in gammas]
        ok = all(r["scaling_holds"] and (r["normalized_unchanged"] or not r["normalized_applicable"]) for r in out)
    elif kind == "perturbation":
        out = [V.verify_perturbation(g, alpha=args.small).to_dict(),
               V.verify_perturbation(g, gamma=args.small).to_dict()]
        ok = all(r["f2_monotone"] for r in out)
    else:
        raise ValidationError(f"unknown check {kind!r}")
    return {"check": kind, "passed": ok, "results": out}


def cmd_verify(args) -> int:
    g = _read_graph(args.graph, args.n)
    kinds = ["bounds", "range", "monotone", "corollary", "perturbation"] if args.check == "all" else [args.check]
    results = []
    for kind in kinds:
        try:
            results.append(_verify_one(kind, g, args))
        except ValidationError as exc:
            if args.check != "all":
                raise
            results.append({"check": kind, "passed": None, "skipped": str(exc)})
    passed = all(r["passed"] is not False for r in results)
    _emit(args, _clean({"passed": passed, "checks": results}))
    return EXIT_NUMERICAL if args.strict and not passed else EXIT_OK


def cmd_random(args) -> int:
    labels = None
    if args.kind == "er":
        g = gen_erdos_renyi(args.nodes, args.p, args.seed)
    elif args.kind == "circulant":
        g = gen_regular_circulant(args.nodes, [int(x) for x in _csv_ints(args.offsets)])
    else:
        g, labels = gen_planted_partition(args.nodes, args.classes, args.p_in, args.p_out, args.seed)
    if args.format == "json":
        payload = {"n": g.n, "edges": [[u, v] for u, v, _ in g.edges()]}
        if labels is not None:
            payload["labels"] = labels.tolist()
        _emit(args, payload)
    else:
        _emit(args, None, dump_edge_list(g))
    if labels is not None and args.labels_out:
        Path(args.labels_out).write_text("".join(f"{int(c)}\n" for c in labels), encoding="utf-8")
    return EXIT_OK


def _dataset(args) -> Dataset:
    if args.planted:
        n, k, p_in, p_out = _csv_ints(args.planted, 4)
        return planted_dataset(int(n), int(k), p_in, p_out, seed=args.seed, n_features=args.n_features,
                               signal=args.signal,
                               ratios=tuple(_csv_ints(args.ratios, 3)), n_splits=args.splits)
    if not (args.graph and args.features and args.labels):
        raise ValidationError("give --planted or all of --graph, --features, --labels")
    X = load_features_csv(Path(args.features).read_text(encoding="utf-8"))
    y = load_labels_csv(Path(args.labels).read_text(encoding="utf-8"))
    g = _read_graph(args.graph, X.shape[0])
    splits = make_splits(g.n, tuple(_csv_ints(args.ratios, 3)), args.splits, args.seed, y)
    return Dataset(g, X, y, splits, args.seed)


def _sweep_conf(args) -> SweepConfig:
    hyper = Hyperparams()
    if args.config:
        hyper = Hyperparams.from_json(Path(args.config).read_text(encoding="utf-8"))
    if args.epochs is not None:
        hyper = Hyperparams(**{**hyper.__dict__, "epochs": args.epochs})
    return SweepConfig(hyper=hyper, n_splits=args.splits, ratios=tuple(_csv_ints(args.ratios, 3)),
                       seed=args.seed, metric=args.metric, workers=args.workers)


def cmd_sweep(args) -> int:
    ds, conf = _dataset(args), _sweep_conf(args)
    if args.mode == "both":
        sl, pe, cat = run_both(ds, args.k_max, conf)
        payload = {"self_loop": sl.to_dict(), "parallel_edge": pe.to_dict(), "category": cat.to_dict()}
    else:
        payload = {args.mode: run_sweep(ds, args.mode, args.k_max, conf).to_dict()}
    _emit(args, _clean(payload))
    return EXIT_OK


def cmd_grid(args) -> int:
    rep = run_grid(_dataset(args), args.alpha_max, args.gamma_max, _sweep_conf(args))
    if args.format == "json":
        _emit(args, rep.to_dict())
    else:
        _emit(args, None, rep.to_csv())
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.graph:
        g = _read_graph(args.graph)
    else:
        n, p = _csv_ints(args.random_er, 2)
        g = gen_erdos_renyi(int(n), p, args.seed)
    conf = SweepConfig(hyper=Hyperparams(epochs=args.epochs), n_splits=args.splits, seed=args.seed)
    rep = run_bench(g, k_max=args.k_max, conf=conf, size_cap=args.size_cap)
    _emit(args, rep.to_dict())
    return EXIT_OK


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="master RNG seed")
    parser.add_argument("--out", default=d(None), help="write output here instead of stdout")
    parser.add_argument("--format", choices=["json", "csv"], default=d(None))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specrewire", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument("--graph", help="edge-list file ('-' for stdin)")
    graph_in.add_argument("--n", type=int, default=None, help="minimum node count")

    rew = argparse.ArgumentParser(add_help=False)
    rew.add_argument("--self-loops", default="0", help="alpha: self-loops per node")
    rew.add_argument("--parallel-edges", default="0", help="gamma: extra copies of every edge")
    rew.add_argument("--allow-real", action="store_true", help="accept non-integer alpha/gamma")

    train_in = argparse.ArgumentParser(add_help=False)
    train_in.add_argument("--graph")
    train_in.add_argument("--features", help="CSV, one row per node")
    train_in.add_argument("--labels", help="one integer class id per line")
    train_in.add_argument("--planted", help="synthetic task n,classes,p_in,p_out")
    train_in.add_argument("--n-features", type=int, default=16)
    train_in.add_argument("--signal", type=float, default=1.0, help="class-centroid strength of planted features")
    train_in.add_argument("--splits", type=int, default=3)
    train_in.add_argument("--ratios", default="0.6,0.2,0.2")
    train_in.add_argument("--metric", choices=["accuracy", "roc_auc"], default="accuracy")
    train_in.add_argument("--config", help="JSON file of GCN hyperparameters")
    train_in.add_argument("--epochs", type=int, default=None)
    train_in.add_argument("--workers", type=int, default=1)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[common, graph_in], help="graph statistics")
    p.add_argument("--epsilon", type=float, default=1e-12)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("rewire", parents=[common, graph_in, rew], help="apply self-loops / parallel edges")
    p.set_defaults(func=cmd_rewire)

    p = sub.add_parser("spectrum", parents=[common, graph_in, rew], help="normalized spectrum and histogram")
    p.add_argument("--operator", choices=["laplacian", "adjacency"], default="laplacian")
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--tol", type=float, default=ZERO_TOL)
    p.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", parents=[common, graph_in], help="check the spectral bounds")
    p.add_argument("check", choices=["bounds", "range", "monotone", "corollary", "perturbation", "all"])
    p.add_argument("--alphas", default="1..5", help="'lo..hi' or comma list")
    p.add_argument("--gammas", default="1..5", help="'lo..hi' or comma list")
    p.add_argument("--small", type=float, default=1e-3, help="perturbation size")
    p.add_argument("--strict", action="store_true", help="exit 3 when any check fails")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", parents=[common], help="seeded random graphs")
    p.add_argument("kind", choices=["er", "circulant", "planted"])
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--offsets", default="1")
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--p-in", type=float, default=0.9)
    p.add_argument("--p-out", type=float, default=0.05)
    p.add_argument("--labels-out")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("sweep", parents=[common, train_in], help="GCN trend sweep")
    p.add_argument("--mode", choices=["self_loop", "parallel_edge", "both"], default="both")
    p.add_argument("--k-max", type=int, default=5)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("grid", parents=[common, train_in], help="combined alpha x gamma sweep")
    p.add_argument("--alpha-max", type=int, default=5)
    p.add_argument("--gamma-max", type=int, default=5)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("bench", parents=[common], help="eigendecomposition vs sweep runtime")
    p.add_argument("--graph")
    p.add_argument("--random-er", default="100,0.1", help="n,p when no --graph is given")
    p.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP)
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("--splits", type=int, default=1)
    p.add_argument("--epochs", type=int, default=50)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
