"""Pure-Python fallback for the compiled kernels in ``_kernels.pyx``.

Same algorithms, same outputs up to rounding; the inner loops that dominate
runtime are vectorized with numpy instead of compiled.
"""
from __future__ import annotations

import math

import numpy as np

_EPS = 2.0**-52
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _tred2(V: np.ndarray, want_vectors: bool) -> tuple[np.ndarray, np.ndarray]:
    n = V.shape[0]
    d = V[n - 1].copy()
    e = np.zeros(n)

    for i in range(n - 1, 0, -1):
        scale = float(np.abs(d[:i]).sum())
        h = 0.0
        if scale == 0.0:
            e[i] = d[i - 1]
            d[:i] = V[i - 1, :i]
            V[i, :i] = 0.0
            V[:i, i] = 0.0
        else:
            d[:i] /= scale
            h = float(d[:i] @ d[:i])
            f = d[i - 1]
            g = math.sqrt(h)
            if f > 0:
                g = -g
            e[i] = scale * g
            h = h - f * g
            d[i - 1] = f - g

            # lower triangle of V[:i, :i] holds the active symmetric block
            low = np.tril(V[:i, :i])
            sym = low + low.T - np.diag(np.diag(low))
            V[:i, i] = d[:i]
            e[:i] = sym @ d[:i]

            e[:i] /= h
            f = float(e[:i] @ d[:i])
            hh = f / (h + h)
            e[:i] -= hh * d[:i]
            upd = np.outer(e[:i], d[:i]) + np.outer(d[:i], e[:i])
            V[:i, :i] -= np.tril(upd)
            d[:i] = V[i - 1, :i]
            V[i, :i] = 0.0
        d[i] = h

    if not want_vectors:
        d = np.diag(V).copy()
        e[0] = 0.0
        return d, e

    for i in range(n - 1):
        V[n - 1, i] = V[i, i]
        V[i, i] = 1.0
        h = d[i + 1]
        if h != 0.0:
            col = V[: i + 1, i + 1]
            d[: i + 1] = col / h
            g = col @ V[: i + 1, : i + 1]
            V[: i + 1, : i + 1] -= np.outer(d[: i + 1], g)
        V[: i + 1, i + 1] = 0.0
    d = V[n - 1].copy()
    V[n - 1] = 0.0
    V[n - 1, n - 1] = 1.0
    e[0] = 0.0
    return d, e


def _tql2(V: np.ndarray | None, d: np.ndarray, e: np.ndarray, max_iter: int) -> None:
    n = d.shape[0]
    e[:-1] = e[1:]
    e[n - 1] = 0.0
    f = 0.0
    tst1 = 0.0
    hypot = math.hypot

    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        m = l
        while m < n:
            if abs(e[m]) <= _EPS * tst1:
                break
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > max_iter:
                    raise ArithmeticError("QL iteration did not converge")
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                d[l + 2 :] -= h
                f += h

                p = d[m]
                c = c2 = c3 = 1.0
                el1 = e[l + 1]
                s = s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    if V is not None:
                        hcol = V[:, i + 1].copy()
                        V[:, i + 1] = s * V[:, i] + c * hcol
                        V[:, i] = c * V[:, i] - s * hcol
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if not abs(e[l]) > _EPS * tst1:
                    break
        d[l] = d[l] + f
        e[l] = 0.0


def symmetric_eigen(a, want_vectors: bool = True, max_iter: int = 60):
    """Eigen-decompose a dense symmetric matrix; see ``_kernels.symmetric_eigen``."""
    V = np.array(a, dtype=np.float64, order="C", copy=True)
    n = V.shape[0]
    if n == 0:
        return np.zeros(0), (np.zeros((0, 0)) if want_vectors else None)
    d, e = _tred2(V, want_vectors)
    _tql2(V if want_vectors else None, d, e, max_iter)
    return d, (V if want_vectors else None)


def pair_uniforms(n: int, key: int) -> np.ndarray:
    total = n * (n - 1) // 2
    t = np.arange(1, total + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(key) + t * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)
