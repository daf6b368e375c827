import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specrewire.errors import ValidationError
from specrewire.graph import is_regular
from specrewire.randgraph import (
    GenSpec, edge_homophily, gen_erdos_renyi, gen_planted_partition, gen_regular_circulant, stream_key,
)


def test_er_reproducible(backend):
    a = gen_erdos_renyi(30, 0.3, seed=11)
    b = gen_erdos_renyi(30, 0.3, seed=11)
    assert a == b
    assert a != gen_erdos_renyi(30, 0.3, seed=12)


def test_er_identical_across_backends():
    from specrewire import _backend
    graphs = []
    for impl in _backend.available_backends().values():
        u = impl.pair_uniforms(25, stream_key(3, "erdos_renyi"))
        graphs.append(np.flatnonzero(u < 0.4).tolist())
    assert all(g == graphs[0] for g in graphs)


def test_er_extremes():
    assert gen_erdos_renyi(10, 0.0, seed=1).m == 0
    assert gen_erdos_renyi(10, 1.0, seed=1).m == 45


def test_er_edge_rate():
    g = gen_erdos_renyi(200, 0.1, seed=0)
    assert abs(g.m / (200 * 199 / 2) - 0.1) < 0.01


@pytest.mark.parametrize("bad", [-0.1, 1.5])
def test_bad_probability(bad):
    with pytest.raises(ValidationError):
        gen_erdos_renyi(5, bad, seed=0)


@pytest.mark.parametrize("n,offsets,k", [(6, [1], 2), (8, [1], 2), (5, [1, 2], 4), (6, [3], 1), (8, [1, 4], 3)])
def test_circulant_regular(n, offsets, k):
    g = gen_regular_circulant(n, offsets)
    assert is_regular(g) == (True, float(k))
    assert np.all(g.weight == 1.0)


@pytest.mark.parametrize("offsets", [[0], [4], [1, 1], []])
def test_circulant_bad_offsets(offsets):
    with pytest.raises(ValidationError):
        gen_regular_circulant(6, offsets)


def test_planted_partition_homophily():
    g, y = gen_planted_partition(60, 2, 0.05, 0.9, seed=0)
    assert y.tolist() == [i % 2 for i in range(60)]
    assert edge_homophily(g, y) < 0.2
    g, y = gen_planted_partition(60, 2, 0.9, 0.05, seed=0)
    assert edge_homophily(g, y) > 0.8


def test_streams_differ_by_kind():
    assert stream_key(0, "erdos_renyi") != stream_key(0, "planted_partition")


def test_genspec():
    spec = GenSpec("erdos_renyi", 10, seed=4, p=0.5)
    assert spec.build() == gen_erdos_renyi(10, 0.5, 4)
    with pytest.raises(ValidationError):
        GenSpec("nope", 3).build()


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.floats(0, 1), st.integers(0, 2**40))
def test_er_simple_graph(n, p, seed):
    g = gen_erdos_renyi(n, p, seed)
    assert np.all(g.src < g.dst)
    assert np.all(g.weight == 1.0) and np.all(g.loop_weight == 0)
