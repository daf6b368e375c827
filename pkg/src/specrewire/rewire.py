"""Self-loop and parallel-edge rewiring as weight transformations.

Adding ``alpha`` self-loops per node maps ``A -> A + alpha*I``; adding
``gamma`` parallel copies of every edge maps ``A -> (gamma + 1)*A`` on the
off-diagonal.  Both return new graphs and never touch their input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .graph import Graph, _frozen


def _check_multiplicity(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise ValidationError(f"{name} must be a finite nonnegative number, got {value}")
    return value


@dataclass(frozen=True)
class RewireConfig:
    alpha: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_multiplicity("alpha", self.alpha))
        object.__setattr__(self, "gamma", _check_multiplicity("gamma", self.gamma))

    @classmethod
    def self_loops(cls, k: float) -> "RewireConfig":
        """``A + k*I``."""
        return cls(alpha=k, gamma=0.0)

    @classmethod
    def parallel_edges(cls, k: float) -> "RewireConfig":
        """``k*A + I``: ``k - 1`` extra copies of every edge plus one self-loop."""
        if k < 1:
            raise ValidationError("parallel-edge multiplicity k must be >= 1")
        return cls(alpha=1.0, gamma=k - 1.0)


def add_self_loops(g: Graph, alpha: float) -> Graph:
    alpha = _check_multiplicity("alpha", alpha)
    if alpha == 0.0:
        return g
    return Graph(g.n, g.src, g.dst, g.weight, _frozen(g.loop_weight + alpha))


def add_parallel_edges(g: Graph, gamma: float) -> Graph:
    """Scale every off-diagonal weight by ``gamma + 1``; loop mass is kept."""
    gamma = _check_multiplicity("gamma", gamma)
    if gamma == 0.0:
        return g
    return Graph(g.n, g.src, g.dst, _frozen(g.weight * (gamma + 1.0)), g.loop_weight)


def rewire(g: Graph, cfg: RewireConfig) -> Graph:
    """Adjacency ``(gamma + 1)*A + alpha*I`` (existing loops are not scaled)."""
    return add_self_loops(add_parallel_edges(g, cfg.gamma), cfg.alpha)
