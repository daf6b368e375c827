"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--sizes 50,100,200] [--repeat 3]
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from specrewire import _backend


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="50,100,200")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    impls = _backend.available_backends()
    rows = []
    for n in (int(s) for s in args.sizes.split(",")):
        B = np.random.default_rng(n).standard_normal((n, n))
        M = B + B.T
        ref = np.linalg.eigvalsh(M)
        for name, impl in sorted(impls.items()):
            w, _ = impl.symmetric_eigen(M)
            err = float(np.max(np.abs(np.sort(w) - ref)))
            rows.append({
                "n": n,
                "backend": name,
                "eigen_vectors_s": _best(lambda: impl.symmetric_eigen(M, True), args.repeat),
                "eigen_values_s": _best(lambda: impl.symmetric_eigen(M, False), args.repeat),
                "pair_uniforms_s": _best(lambda: impl.pair_uniforms(n * 10, 1), args.repeat),
                "max_abs_err_vs_lapack": err,
            })
    print(f"{'n':>5} {'backend':>9} {'eig+vec s':>10} {'eig s':>10} {'rng s':>10} {'err':>9}")
    for r in rows:
        print(f"{r['n']:>5} {r['backend']:>9} {r['eigen_vectors_s']:>10.4f} {r['eigen_values_s']:>10.4f} "
              f"{r['pair_uniforms_s']:>10.4f} {r['max_abs_err_vs_lapack']:>9.1e}")
    json.dump(rows, sys.stderr, indent=1)
    sys.stderr.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
