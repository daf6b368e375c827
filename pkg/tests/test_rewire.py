import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specrewire.errors import ValidationError
from specrewire.graph import Graph
from specrewire.randgraph import gen_erdos_renyi
from specrewire.rewire import RewireConfig, add_parallel_edges, add_self_loops, rewire

from conftest import k_n


def test_self_loops_add_alpha_identity():
    g = k_n(3)
    assert np.array_equal(add_self_loops(g, 2).to_dense(), g.to_dense() + 2 * np.eye(3))


def test_parallel_edges_scale_offdiagonal():
    g = Graph.from_edges(3, [(0, 1), (1, 2, 2.0)], loop_weight=[1, 0, 0])
    h = add_parallel_edges(g, 2)
    A = g.to_dense()
    expected = 3 * (A - np.diag(np.diag(A))) + np.diag(np.diag(A))
    assert np.array_equal(h.to_dense(), expected)


def test_rewire_matches_formula():
    g = gen_erdos_renyi(9, 0.4, seed=1)
    A = g.to_dense()
    h = rewire(g, RewireConfig(2, 3))
    assert np.array_equal(h.to_dense(), 4 * A + 2 * np.eye(9))


def test_sweep_constructors():
    assert RewireConfig.self_loops(3) == RewireConfig(3, 0)
    assert RewireConfig.parallel_edges(1) == RewireConfig(1, 0)
    assert RewireConfig.parallel_edges(4) == RewireConfig(1, 3)
    with pytest.raises(ValidationError):
        RewireConfig.parallel_edges(0.5)


@pytest.mark.parametrize("a,c", [(-1, 0), (0, -0.5), (float("nan"), 0), (0, float("inf"))])
def test_invalid_multiplicity(a, c):
    with pytest.raises(ValidationError):
        RewireConfig(a, c)


def test_input_untouched():
    g = k_n(4)
    before = g.to_dense().copy()
    rewire(g, RewireConfig(3, 2))
    assert np.array_equal(g.to_dense(), before)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 20), st.integers(0, 10**6), st.integers(0, 6), st.integers(0, 6))
def test_degrees_after_rewire(n, seed, a, c):
    g = gen_erdos_renyi(n, 0.5, seed)
    h = rewire(g, RewireConfig(a, c))
    assert np.allclose(h.degrees(), (c + 1) * g.degrees() + a)
