import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specrewire.errors import ParseError, ValidationError
from specrewire.graph import (
    Graph, compute_metrics, connected_components, dump_edge_list, is_regular, load_edge_list,
)
from specrewire.randgraph import gen_erdos_renyi
from specrewire.rewire import RewireConfig
from specrewire.spectral import laplacian_spectrum

from conftest import k_n, path


def test_single_edge():
    g = load_edge_list("0 1\n")
    assert g.n == 2 and g.edges() == [(0, 1, 1.0)]


def test_duplicate_lines_merge_by_summing():
    g = load_edge_list("0 1\n1 0\n")
    assert g.edges() == [(0, 1, 2.0)]


def test_triangle():
    g = load_edge_list("0 1\n0 2\n1 2\n")
    assert g.n == 3 and g.m == 3


def test_comments_weights_and_hint():
    text = "# header\n\n0 2 0.5  # trailing\n2 2 3\n"
    g = load_edge_list(io.StringIO(text), n_hint=5)
    assert g.n == 5
    assert g.edges() == [(0, 2, 0.5)]
    assert g.loop_weight[2] == 3.0


def test_hint_smaller_than_ids_is_ignored():
    assert load_edge_list("0 4\n", n_hint=2).n == 5


@pytest.mark.parametrize("text,line", [("0 1\nfoo bar\n", 2), ("0\n", 1), ("0 1 2 3\n", 1), ("0 1 x\n", 1)])
def test_parse_errors_carry_line_number(text, line):
    with pytest.raises(ParseError) as exc:
        load_edge_list(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_negative_id_is_validation_error():
    with pytest.raises(ValidationError):
        load_edge_list("0 -1\n")


def test_negative_weight_rejected():
    with pytest.raises(ValidationError):
        Graph.from_edges(2, [(0, 1, -1.0)])


def test_dump_roundtrip():
    g = Graph.from_edges(4, [(0, 1, 2.5), (1, 3)], loop_weight=[0, 1.5, 0, 0])
    h = load_edge_list(dump_edge_list(g))
    assert h == g


def test_arrays_are_read_only():
    g = k_n(3)
    with pytest.raises(ValueError):
        g.weight[0] = 5.0


def test_dense_roundtrip_symmetric():
    g = Graph.from_edges(4, [(0, 1), (2, 3, 2.0)], loop_weight=[1, 0, 0, 0])
    A = g.to_dense()
    assert np.array_equal(A, A.T)
    assert Graph.from_dense(A) == g


def test_csr_matches_dense():
    g = gen_erdos_renyi(15, 0.3, seed=2)
    indptr, indices, data = g.csr()
    A = np.zeros((g.n, g.n))
    for i in range(g.n):
        A[i, indices[indptr[i]:indptr[i + 1]]] = data[indptr[i]:indptr[i + 1]]
    assert np.array_equal(A, g.to_dense())


def test_metrics_k3():
    met = compute_metrics(k_n(3))
    assert met.density == 1.0 and met.avg_degree == 2.0 and met.isolated_count == 0


def test_metrics_path():
    met = compute_metrics(path(3))
    assert met.density == pytest.approx(2 / 3, abs=1e-15)
    assert met.avg_degree == pytest.approx(4 / 3, abs=1e-15)


def test_metrics_log_variants_exact():
    eps = 1e-6
    met = compute_metrics(path(3), eps)
    assert met.log_density == -math.log(2 / 3 + eps)
    assert met.log_avg_degree == -math.log(4 / 3 + eps)
    assert met.epsilon == eps


def test_isolated_share_at_cornell_scale():
    # 96 connected nodes in pairs, 87 isolated
    g = Graph.from_edges(183, [(i, i + 1) for i in range(0, 96, 2)])
    met = compute_metrics(g)
    assert met.isolated_count == 87
    assert round(met.isolated_pct, 1) == 47.5


def test_loop_only_node_is_not_isolated():
    g = Graph.from_edges(3, [], loop_weight=[1, 0, 0])
    assert compute_metrics(g).isolated_count == 2


def test_single_node_density_zero():
    met = compute_metrics(Graph.from_edges(1))
    assert met.density == 0.0 and met.avg_degree == 0.0


@pytest.mark.parametrize("g,count", [
    (k_n(3), 1),
    (Graph.from_edges(4, [(0, 1), (2, 3)]), 2),
    (Graph.from_edges(3), 3),
])
def test_components(g, count):
    labels, c = connected_components(g)
    assert c == count
    assert set(labels.tolist()) == set(range(count))


def test_is_regular():
    assert is_regular(k_n(4)) == (True, 3.0)
    assert is_regular(path(3))[0] is False


graphs = st.builds(
    lambda n, p, s: gen_erdos_renyi(n, p, s),
    st.integers(1, 25), st.floats(0, 1), st.integers(0, 2**32),
)


@settings(max_examples=60, deadline=None)
@given(graphs, st.floats(0, 3))
def test_degree_sum_identity(g, loop):
    h = Graph(g.n, g.src, g.dst, g.weight, np.full(g.n, loop))
    assert h.degrees().sum() == pytest.approx(2 * h.weight.sum() + h.loop_weight.sum(), rel=1e-12)
    assert np.allclose(h.degrees(), h.to_dense().sum(axis=1), rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(graphs, st.randoms(use_true_random=False))
def test_metrics_permutation_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert compute_metrics(g.permuted(perm)).to_dict() == compute_metrics(g).to_dict()


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_zero_multiplicity_counts_components(g):
    s = laplacian_spectrum(g, RewireConfig(1.0, 0.0))
    _, c = connected_components(g)
    assert int(np.sum(np.abs(s.eigenvalues) <= 1e-8)) == c
