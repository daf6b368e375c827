"""Seeded random graph generators.

Every pair ``u < v`` draws one uniform from a SplitMix64 counter stream keyed
by ``(seed, generator kind)``; the draw for a pair depends only on its
row-major pair index, so output is identical across runs, platforms and
kernel backends.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ValidationError
from .graph import Graph

_MASK64 = (1 << 64) - 1
_STREAM_TAGS = {"erdos_renyi": 0x45524452, "planted_partition": 0x504C4E54}


def _splitmix(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, kind: str) -> int:
    return _splitmix((int(seed) & _MASK64) ^ _STREAM_TAGS[kind])


def _pair_index_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    u, v = np.triu_indices(n, k=1)
    return u.astype(np.int64), v.astype(np.int64)


def _check_prob(name: str, p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {p}")
    return p


@dataclass(frozen=True)
class GenSpec:
    """Serializable description of a generated graph."""

    kind: str
    n: int
    seed: int = 0
    p: float | None = None
    offsets: tuple[int, ...] | None = None
    k_classes: int | None = None
    p_in: float | None = None
    p_out: float | None = None

    def build(self):
        if self.kind == "erdos_renyi":
            return gen_erdos_renyi(self.n, self.p, self.seed)
        if self.kind == "regular_circulant":
            return gen_regular_circulant(self.n, self.offsets)
        if self.kind == "planted_partition":
            return gen_planted_partition(self.n, self.k_classes, self.p_in, self.p_out, self.seed)
        raise ValidationError(f"unknown generator kind {self.kind!r}")


def gen_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): every unordered pair is an edge independently with probability p."""
    n = int(n)
    if n < 1:
        raise ValidationError("n must be >= 1")
    p = _check_prob("p", p)
    draws = _backend.pair_uniforms(n, stream_key(seed, "erdos_renyi"))
    u, v = _pair_index_arrays(n)
    keep = draws < p
    return Graph.from_arrays(n, u[keep], v[keep])


def gen_regular_circulant(n: int, offsets) -> Graph:
    """Node i joins i +/- o (mod n) for each offset o."""
    n = int(n)
    offsets = [int(o) for o in offsets]
    if n < 2:
        raise ValidationError("circulant graphs need n >= 2")
    if not offsets or len(set(offsets)) != len(offsets):
        raise ValidationError("offsets must be a nonempty set of distinct values")
    if any(o <= 0 or 2 * o > n for o in offsets):
        raise ValidationError(f"offsets must lie in [1, n/2] = [1, {n // 2}]")
    i = np.arange(n)
    us = np.concatenate([i for _ in offsets])
    vs = np.concatenate([(i + o) % n for o in offsets])
    g = Graph.from_arrays(n, us, vs)
    # offset n/2 hits every pair twice; keep unit weights
    return Graph(g.n, g.src, g.dst, np.ones_like(g.weight), g.loop_weight)


def gen_planted_partition(
    n: int, k_classes: int, p_in: float, p_out: float, seed: int
) -> tuple[Graph, np.ndarray]:
    """Balanced planted partition; returns the graph and class labels.

    Node i belongs to class ``i % k_classes``.  ``p_in < p_out`` gives a
    heterophilic graph.
    """
    n, k_classes = int(n), int(k_classes)
    if k_classes < 2:
        raise ValidationError("k_classes must be >= 2")
    if n < k_classes:
        raise ValidationError("n must be >= k_classes")
    p_in = _check_prob("p_in", p_in)
    p_out = _check_prob("p_out", p_out)
    labels = np.arange(n) % k_classes
    draws = _backend.pair_uniforms(n, stream_key(seed, "planted_partition"))
    u, v = _pair_index_arrays(n)
    thresh = np.where(labels[u] == labels[v], p_in, p_out)
    keep = draws < thresh
    return Graph.from_arrays(n, u[keep], v[keep]), labels


def edge_homophily(g: Graph, labels) -> float:
    """Fraction of edges joining same-label endpoints."""
    labels = np.asarray(labels)
    if g.m == 0:
        return float("nan")
    return float(np.mean(labels[g.src] == labels[g.dst]))
