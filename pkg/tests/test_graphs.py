import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gwcoarsen import (
    Graph,
    InvariantViolation,
    MassScheme,
    MeasureNetwork,
    ParseError,
    SimilarityKind,
    ZeroDegreeNode,
    ZeroTotalMass,
    build_similarity,
    load_collection,
    load_graph,
    save_collection,
    to_measure_network,
)
from tests.conftest import random_graph


def test_signless_laplacian_k3(k3):
    s = build_similarity(k3, SimilarityKind.SIGNLESS_LAPLACIAN)
    assert np.array_equal(s, [[2, 1, 1], [1, 2, 1], [1, 1, 2]])


def test_combinatorial_laplacian_single_node():
    g = Graph.from_edges(1, [])
    s = build_similarity(g, SimilarityKind.COMBINATORIAL_LAPLACIAN)
    assert np.array_equal(s, [[0.0]])


def test_combinatorial_laplacian_path3():
    g = Graph.from_edges(3, [[0, 1, 1.0], [1, 2, 1.0]])
    s = build_similarity(g, SimilarityKind.COMBINATORIAL_LAPLACIAN)
    assert np.array_equal(s, [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])


def test_normalized_kinds_reject_isolated_node():
    g = Graph.from_edges(3, [[0, 1, 1.0]])
    for kind in (SimilarityKind.NORMALIZED_LAPLACIAN,
                 SimilarityKind.NORMALIZED_SIGNLESS_LAPLACIAN):
        with pytest.raises(ZeroDegreeNode) as exc:
            build_similarity(g, kind)
        assert exc.value.node == 2


def test_to_measure_network_k3_uniform(k3):
    net = to_measure_network(k3, SimilarityKind.SIGNLESS_LAPLACIAN, MassScheme.UNIFORM)
    assert np.array_equal(net.S, [[2, 1, 1], [1, 2, 1], [1, 1, 2]])
    assert np.allclose(net.m, [1 / 3, 1 / 3, 1 / 3])
    assert net.psd_checked


def test_to_measure_network_single_node_adjacency():
    g = Graph.from_edges(1, [])
    net = to_measure_network(g, SimilarityKind.RAW_ADJACENCY, MassScheme.UNIFORM)
    assert np.array_equal(net.S, [[0.0]])
    assert np.array_equal(net.m, [1.0])


def test_degree_proportional_masses_path3():
    g = Graph.from_edges(3, [[0, 1, 1.0], [1, 2, 1.0]])
    net = to_measure_network(
        g, SimilarityKind.COMBINATORIAL_LAPLACIAN, MassScheme.DEGREE_PROPORTIONAL
    )
    assert np.allclose(net.m, [0.25, 0.5, 0.25], atol=1e-15)


def test_degree_proportional_needs_edges():
    g = Graph.from_edges(2, [])
    with pytest.raises(ZeroTotalMass):
        to_measure_network(g, SimilarityKind.RAW_ADJACENCY, MassScheme.DEGREE_PROPORTIONAL)


def test_explicit_masses():
    g = Graph.from_edges(2, [[0, 1, 1.0]], node_masses=[3.0, 1.0])
    net = to_measure_network(g, SimilarityKind.RAW_ADJACENCY, MassScheme.EXPLICIT)
    assert np.allclose(net.m, [0.75, 0.25])


def test_graph_rejects_self_loop():
    with pytest.raises(InvariantViolation, match="self-loop"):
        Graph.from_edges(2, [[0, 0, 1.0]])


def test_graph_rejects_negative_weight():
    with pytest.raises(InvariantViolation, match="negative"):
        Graph.from_edges(2, [[0, 1, -1.0]])


def test_graph_rejects_bad_index():
    with pytest.raises(InvariantViolation):
        Graph.from_edges(2, [[0, 5, 1.0]])


def test_duplicate_edges_are_summed():
    g = Graph.from_edges(2, [[0, 1, 1.0], [1, 0, 2.5]])
    assert g.edges == ((0, 1, 3.5),)


def test_measure_network_rejects_asymmetric():
    with pytest.raises(InvariantViolation, match="symmetric"):
        MeasureNetwork(S=np.array([[1.0, 2.0], [0.0, 1.0]]), m=np.array([0.5, 0.5]))


def test_measure_network_rejects_bad_mass():
    s = np.eye(2)
    with pytest.raises(InvariantViolation):
        MeasureNetwork(S=s, m=np.array([0.5, 0.6]))
    with pytest.raises(InvariantViolation):
        MeasureNetwork(S=s, m=np.array([1.0, 0.0]))


# --- file round trips -------------------------------------------------------


def test_load_collection_roundtrip(tmp_path):
    graphs = [
        Graph.from_edges(2, [[0, 1, 1.0]]),
        Graph.from_edges(3, [[0, 1, 2.0], [1, 2, 0.5]], node_masses=[1.0, 2.0, 1.0]),
    ]
    path = tmp_path / "coll.json"
    save_collection(str(path), graphs, labels=[0, 1])
    loaded = load_collection(str(path))
    assert len(loaded) == 2
    assert loaded[0].edges == graphs[0].edges
    assert loaded[1].node_masses == graphs[1].node_masses


def test_load_graph_self_loop_is_invariant_violation(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "edges": [[0, 0, 1.0]]}))
    with pytest.raises(InvariantViolation, match="self-loop"):
        load_graph(str(path))


def test_load_graph_missing_n_is_parse_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"edges": []}))
    with pytest.raises(ParseError, match="'n'"):
        load_graph(str(path))


def test_load_graph_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError, match="line"):
        load_graph(str(path))


# --- spectral invariants over random graphs ---------------------------------


@pytest.mark.parametrize("seed", range(8))
def test_laplacian_row_sums_and_psd(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(3, 24)))
    lap = build_similarity(g, SimilarityKind.COMBINATORIAL_LAPLACIAN)
    assert np.max(np.abs(lap.sum(axis=1))) < 1e-12
    w = np.linalg.eigvalsh(lap)
    assert w.min() >= -1e-10


@pytest.mark.parametrize("seed", range(8))
def test_signless_kinds_are_psd(seed):
    rng = np.random.default_rng(100 + seed)
    g = random_graph(rng, int(rng.integers(3, 24)))
    for kind in (SimilarityKind.SIGNLESS_LAPLACIAN,
                 SimilarityKind.NORMALIZED_SIGNLESS_LAPLACIAN):
        w = np.linalg.eigvalsh(build_similarity(g, kind))
        assert w.min() >= -1e-8 * max(w.max(), 0.0)


@pytest.mark.parametrize("seed", range(8))
def test_normalized_laplacian_range(seed):
    rng = np.random.default_rng(200 + seed)
    g = random_graph(rng, int(rng.integers(3, 24)))
    w = np.linalg.eigvalsh(build_similarity(g, SimilarityKind.NORMALIZED_LAPLACIAN))
    assert w.min() >= -1e-10
    assert w.max() <= 2 + 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), scheme=st.sampled_from(list(MassScheme)))
def test_masses_on_simplex(seed, scheme):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 20))
    g = random_graph(rng, n)
    if scheme is MassScheme.EXPLICIT:
        g = Graph(g.n_nodes, g.edges, tuple(rng.uniform(0.1, 2.0, n)))
    net = to_measure_network(g, SimilarityKind.SIGNLESS_LAPLACIAN, scheme)
    assert abs(net.m.sum() - 1.0) <= 1e-12
    assert np.all(net.m > 0)
