"""Normalized operators, dense eigendecomposition, and spectral filtering."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import NumericalError, ValidationError
from .graph import Graph
from .rewire import RewireConfig, rewire

DEFAULT_SIZE_CAP = 4000
ZERO_TOL = 1e-8
DEFAULT_BINS = 20


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues, optionally with orthonormal eigenvector columns.

    ``source`` names the operator: ``"laplacian"`` for I - D^-1/2 A D^-1/2 of
    the rewired graph, ``"adjacency"`` for D^-1/2 A D^-1/2, ``"matrix"`` for
    anything handed to :func:`eigendecompose` directly.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    source: str = "matrix"
    alpha: float | None = None
    gamma: float | None = None

    @property
    def n(self) -> int:
        return int(self.eigenvalues.shape[0])

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "eigenvalues": [float(x) for x in self.eigenvalues],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Spectrum":
        return cls(
            eigenvalues=np.asarray(obj["eigenvalues"], dtype=float),
            source=obj["source"],
            alpha=obj.get("alpha"),
            gamma=obj.get("gamma"),
        )


@dataclass(frozen=True)
class SpectrumStats:
    lower_count: int
    higher_count: int
    zero_count: int
    bin_edges: list = field(default_factory=list)
    counts: list = field(default_factory=list)
    tol: float = ZERO_TOL

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def histogram_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_lo", "bin_hi", "count"])
        for lo, hi, c in zip(self.bin_edges[:-1], self.bin_edges[1:], self.counts):
            w.writerow([repr(float(lo)), repr(float(hi)), int(c)])
        return buf.getvalue()


def _inv_sqrt_degrees(g: Graph) -> np.ndarray:
    deg = g.degrees()
    bad = np.flatnonzero(deg <= 0)
    if bad.size:
        raise ValidationError(
            f"node {int(bad[0])} has zero degree; add self-loops before normalizing"
            + (f" ({bad.size} such nodes)" if bad.size > 1 else "")
        )
    return 1.0 / np.sqrt(deg)


def normalized_adjacency(g: Graph) -> np.ndarray:
    """D^-1/2 A D^-1/2 with loop mass on the diagonal of A and in D."""
    s = _inv_sqrt_degrees(g)
    M = g.to_dense()
    M *= s[:, None]
    M *= s[None, :]
    return (M + M.T) / 2.0


def normalized_laplacian(g: Graph, cfg: RewireConfig | None = None) -> np.ndarray:
    h = g if cfg is None else rewire(g, cfg)
    return np.eye(h.n) - normalized_adjacency(h)


def _orient(V: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of each column made positive
    if V.size == 0:
        return V
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def eigendecompose(
    M,
    want_vectors: bool = True,
    *,
    size_cap: int = DEFAULT_SIZE_CAP,
    source: str = "matrix",
    alpha: float | None = None,
    gamma: float | None = None,
) -> Spectrum:
    """Full spectrum of a dense symmetric matrix (Householder + implicit QL)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError("matrix must be square")
    n = M.shape[0]
    if n > size_cap:
        raise ValidationError(
            f"matrix dimension {n} exceeds the dense size cap {size_cap}; use a smaller graph"
        )
    if not np.all(np.isfinite(M)):
        raise NumericalError("matrix has non-finite entries")
    asym = float(np.max(np.abs(M - M.T))) if n else 0.0
    if asym > 1e-10:
        raise ValidationError(f"matrix is not symmetric (max |M - M^T| = {asym:.3g})")
    try:
        w, V = _backend.symmetric_eigen(M, want_vectors)
    except ArithmeticError as exc:
        raise NumericalError(str(exc)) from exc
    order = np.argsort(w, kind="stable")
    w = w[order]
    if V is not None:
        V = _orient(V[:, order])
    return Spectrum(w, V, source, alpha, gamma)


def laplacian_spectrum(
    g: Graph, cfg: RewireConfig | None = None, want_vectors: bool = False, **kw
) -> Spectrum:
    cfg = cfg or RewireConfig()
    return eigendecompose(
        normalized_laplacian(g, cfg), want_vectors,
        source="laplacian", alpha=cfg.alpha, gamma=cfg.gamma, **kw,
    )


def adjacency_spectrum(
    g: Graph, cfg: RewireConfig | None = None, want_vectors: bool = False, **kw
) -> Spectrum:
    cfg = cfg or RewireConfig()
    h = rewire(g, cfg)
    return eigendecompose(
        normalized_adjacency(h), want_vectors,
        source="adjacency", alpha=cfg.alpha, gamma=cfg.gamma, **kw,
    )


def spectrum_stats(s: Spectrum, tol: float = ZERO_TOL, bins: int = DEFAULT_BINS) -> SpectrumStats:
    """Low/high frequency counts (split at 1) and a histogram over [0, 2]."""
    if bins < 1:
        raise ValidationError("bins must be >= 1")
    lam = s.eigenvalues
    lower = int(np.sum(lam < 1.0))
    edges = np.linspace(0.0, 2.0, bins + 1)
    # np.histogram closes the last bin on the right, so lambda = 2 lands there
    counts, _ = np.histogram(np.clip(lam, 0.0, 2.0), bins=edges)
    return SpectrumStats(
        lower_count=lower,
        higher_count=int(lam.shape[0] - lower),
        zero_count=int(np.sum(np.abs(lam) <= tol)),
        bin_edges=[float(x) for x in edges],
        counts=[int(c) for c in counts],
        tol=tol,
    )


def gcn_filter_response(s: Spectrum) -> np.ndarray:
    """Spectral response of one GCN propagation step: ``1 - lambda``."""
    return 1.0 - s.eigenvalues


def graph_filter(s: Spectrum, x, coefficients) -> np.ndarray:
    """``U diag(coefficients) U^T x``."""
    if s.eigenvectors is None:
        raise ValidationError("graph_filter needs a spectrum with eigenvectors")
    x = np.asarray(x, dtype=float)
    coefficients = np.asarray(coefficients, dtype=float)
    if x.shape[0] != s.n or coefficients.shape != (s.n,):
        raise ValidationError(f"signal and coefficients must have length {s.n}")
    U = s.eigenvectors
    xhat = U.T @ x
    if xhat.ndim == 1:
        return U @ (coefficients * xhat)
    return U @ (coefficients[:, None] * xhat)
