"""Weighted undirected graphs, edge-list I/O, and structural statistics."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .errors import ParseError, ValidationError

DEFAULT_EPSILON = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected graph with nonnegative edge weights and per-node loop mass.

    Edges are stored once as ``u < v`` in lexicographic order.  Self-loops
    never appear in the edge arrays; they live in ``loop_weight`` and sit on
    the diagonal of the adjacency matrix.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    loop_weight: np.ndarray
    _csr: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple] = (),
        loop_weight: Iterable[float] | None = None,
    ) -> "Graph":
        """Build a graph, merging duplicate pairs by summing their weights.

        ``edges`` holds ``(u, v)`` or ``(u, v, w)`` tuples.  A pair with
        ``u == v`` adds its weight to that node's loop mass.
        """
        n = int(n)
        if n < 0:
            raise ValidationError("node count must be nonnegative")
        loops = np.zeros(n) if loop_weight is None else np.array(loop_weight, dtype=float)
        if loops.shape != (n,):
            raise ValidationError(f"loop_weight must have length {n}")
        us, vs, ws = [], [], []
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1.0
            else:
                u, v, w = e
            us.append(int(u))
            vs.append(int(v))
            ws.append(float(w))
        u = np.array(us, dtype=np.int64)
        v = np.array(vs, dtype=np.int64)
        w = np.array(ws, dtype=float)
        return cls._canonical(n, u, v, w, loops)

    @classmethod
    def from_arrays(cls, n, u, v, w=None, loop_weight=None) -> "Graph":
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        w = np.ones(u.shape[0]) if w is None else np.asarray(w, dtype=float)
        loops = np.zeros(n) if loop_weight is None else np.asarray(loop_weight, dtype=float).copy()
        return cls._canonical(int(n), u, v, w, loops)

    @classmethod
    def from_dense(cls, A) -> "Graph":
        """Inverse of :meth:`to_dense`; ``A`` must be symmetric."""
        A = np.asarray(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValidationError("adjacency must be square")
        if not np.array_equal(A, A.T):
            raise ValidationError("adjacency must be symmetric")
        u, v = np.nonzero(np.triu(A, 1))
        return cls._canonical(A.shape[0], u, v, A[u, v], np.diag(A).copy())

    @classmethod
    def _canonical(cls, n, u, v, w, loops) -> "Graph":
        if u.shape != v.shape or u.shape != w.shape:
            raise ValidationError("edge arrays differ in length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise ValidationError(f"edge endpoint outside [0, {n})")
        if np.any(w < 0) or np.any(loops < 0):
            raise ValidationError("weights must be nonnegative")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(loops))):
            raise ValidationError("weights must be finite")
        is_loop = u == v
        if is_loop.any():
            np.add.at(loops, u[is_loop], w[is_loop])
            u, v, w = u[~is_loop], v[~is_loop], w[~is_loop]
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        key = lo * max(n, 1) + hi
        uniq, inv = np.unique(key, return_inverse=True)
        merged = np.zeros(uniq.shape[0])
        np.add.at(merged, inv, w)
        src = uniq // max(n, 1)
        dst = uniq % max(n, 1)
        return cls(
            n=n,
            src=_frozen(src.astype(np.int64)),
            dst=_frozen(dst.astype(np.int64)),
            weight=_frozen(merged),
            loop_weight=_frozen(np.asarray(loops, dtype=float)),
        )

    @property
    def m(self) -> int:
        return int(self.src.shape[0])

    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(a), int(b), float(c)) for a, b, c in zip(self.src, self.dst, self.weight)]

    def degrees(self) -> np.ndarray:
        """Weighted degree including loop mass, without building A."""
        deg = self.loop_weight.astype(float).copy()
        deg += np.bincount(self.src, weights=self.weight, minlength=self.n)
        deg += np.bincount(self.dst, weights=self.weight, minlength=self.n)
        return deg

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetric off-diagonal adjacency as ``(indptr, indices, data)``."""
        if "csr" not in self._csr:
            rows = np.concatenate([self.src, self.dst])
            cols = np.concatenate([self.dst, self.src])
            data = np.concatenate([self.weight, self.weight])
            order = np.lexsort((cols, rows))
            rows, cols, data = rows[order], cols[order], data[order]
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(np.bincount(rows, minlength=self.n), out=indptr[1:])
            self._csr["csr"] = tuple(_frozen(a) for a in (indptr, cols, data))
        return self._csr["csr"]

    def to_dense(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        A[self.src, self.dst] = self.weight
        A[self.dst, self.src] = self.weight
        A[np.arange(self.n), np.arange(self.n)] = self.loop_weight
        return A

    def without_loops(self) -> "Graph":
        return Graph(self.n, self.src, self.dst, self.weight, _frozen(np.zeros(self.n)))

    def permuted(self, perm) -> "Graph":
        """Relabel node ``i`` as ``perm[i]``."""
        perm = np.asarray(perm, dtype=np.int64)
        loops = np.zeros(self.n)
        loops[perm] = self.loop_weight
        return Graph.from_arrays(self.n, perm[self.src], perm[self.dst], self.weight, loops)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
            and np.array_equal(self.loop_weight, other.loop_weight)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class GraphMetrics:
    n: int
    m: int
    isolated_count: int
    isolated_pct: float
    density: float
    log_density: float
    avg_degree: float
    log_avg_degree: float
    epsilon: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def load_edge_list(stream: TextIO | str, n_hint: int | None = None) -> Graph:
    """Parse ``u v [w]`` lines; ``#`` starts a comment, blank lines are skipped.

    Duplicate pairs (in either orientation) merge by summing weights.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    us, vs, ws = [], [], []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'u v [w]', got {raw.strip()!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"node ids must be integers, got {raw.strip()!r}", lineno) from None
        try:
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"weight must be a number, got {parts[2]!r}", lineno) from None
        if u < 0 or v < 0:
            raise ValidationError(f"line {lineno}: negative node id")
        if not math.isfinite(w) or w < 0:
            raise ValidationError(f"line {lineno}: weight must be finite and nonnegative")
        us.append(u)
        vs.append(v)
        ws.append(w)
    n = max(max(us, default=-1), max(vs, default=-1)) + 1
    if n_hint is not None:
        n = max(n, int(n_hint))
    return Graph.from_arrays(n, us, vs, ws)


def _fmt_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def dump_edge_list(g: Graph, stream: TextIO | None = None) -> str:
    """Write the edge-list format; loops are emitted as ``i i w`` lines."""
    lines = [f"# n={g.n}"]
    for u, v, w in g.edges():
        lines.append(f"{u} {v}" if w == 1.0 else f"{u} {v} {_fmt_weight(w)}")
    for i in np.flatnonzero(g.loop_weight):
        lines.append(f"{i} {i} {_fmt_weight(g.loop_weight[i])}")
    text = "\n".join(lines) + "\n"
    if stream is not None:
        stream.write(text)
    return text


def compute_metrics(g: Graph, epsilon: float = DEFAULT_EPSILON) -> GraphMetrics:
    """Node/edge counts, isolated nodes, density and average degree.

    The log-scaled variants are ``-ln(x + epsilon)`` of the raw values.
    """
    if g.n < 1:
        raise ValidationError("metrics need at least one node")
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive")
    n, m = g.n, g.m
    touched = np.zeros(n, dtype=bool)
    touched[g.src[g.weight > 0]] = True
    touched[g.dst[g.weight > 0]] = True
    touched |= g.loop_weight > 0
    isolated = int(n - touched.sum())
    density = 2.0 * m / (n * (n - 1)) if n > 1 else 0.0
    avg_degree = 2.0 * m / n
    return GraphMetrics(
        n=n,
        m=m,
        isolated_count=isolated,
        isolated_pct=100.0 * isolated / n,
        density=density,
        log_density=-math.log(density + epsilon),
        avg_degree=avg_degree,
        log_avg_degree=-math.log(avg_degree + epsilon),
        epsilon=epsilon,
    )


def connected_components(g: Graph) -> tuple[np.ndarray, int]:
    """Label nodes by component; labels are numbered in order of first node."""
    parent = np.arange(g.n)

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for u, v, w in zip(g.src, g.dst, g.weight):
        if w <= 0:
            continue
        ru, rv = find(int(u)), find(int(v))
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    labels = np.empty(g.n, dtype=np.int64)
    seen: dict[int, int] = {}
    for i in range(g.n):
        labels[i] = seen.setdefault(find(i), len(seen))
    return labels, len(seen)


def is_regular(g: Graph, atol: float = 0.0) -> tuple[bool, float]:
    """Whether every off-diagonal degree is equal; returns ``(flag, k)``."""
    deg = g.without_loops().degrees()
    if g.n == 0:
        return True, 0.0
    return bool(np.all(np.abs(deg - deg[0]) <= atol)), float(deg[0])
