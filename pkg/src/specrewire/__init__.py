"""Spectral analysis of self-loop and parallel-edge graph rewiring."""
from ._backend import BACKEND
from .errors import NumericalError, ParseError, ValidationError
from .graph import Graph, compute_metrics, connected_components, dump_edge_list, is_regular, load_edge_list
from .rewire import RewireConfig, add_parallel_edges, add_self_loops, rewire
from .spectral import Spectrum, eigendecompose, laplacian_spectrum, normalized_laplacian, spectrum_stats

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Graph", "NumericalError", "ParseError", "RewireConfig", "Spectrum", "ValidationError",
    "add_parallel_edges", "add_self_loops", "compute_metrics", "connected_components", "dump_edge_list",
    "eigendecompose", "is_regular", "laplacian_spectrum", "load_edge_list", "normalized_laplacian",
    "rewire", "spectrum_stats",
]
