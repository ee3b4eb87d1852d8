import numpy as np
import pytest

from gwcoarsen import (
    Graph,
    MassScheme,
    Partition,
    SimilarityKind,
    build_operators,
    to_measure_network,
)


@pytest.fixture
def k3():
    """Fully connected 3-node graph with unit weights."""
    return Graph.from_edges(3, [[0, 1, 1.0], [0, 2, 1.0], [1, 2, 1.0]])


@pytest.fixture
def k3_net(k3):
    """K3 as a measure network with the signless Laplacian and uniform masses."""
    return to_measure_network(k3, SimilarityKind.SIGNLESS_LAPLACIAN, MassScheme.UNIFORM)


@pytest.fixture
def k3_partition():
    """The toy split {{v1}, {v2, v3}}."""
    return Partition(assign=(0, 1, 1), n_clusters=2)


@pytest.fixture
def k3_ops(k3_net, k3_partition):
    return build_operators(k3_partition, k3_net.m)


def random_graph(rng, n, p=0.4, weighted=True):
    """Random graph with no isolated nodes (safe for all similarity kinds)."""
    from gwcoarsen.synthetic import erdos_renyi

    return erdos_renyi(n, p, rng, weighted=weighted, min_degree_one=True)


def random_net(rng, n, kind=SimilarityKind.SIGNLESS_LAPLACIAN, p=0.4,
               scheme=MassScheme.UNIFORM):
    return to_measure_network(random_graph(rng, n, p), kind, scheme)


def random_partition(rng, n_nodes, n_clusters):
    """Random assignment with every cluster id used at least once."""
    assign = rng.integers(0, n_clusters, size=n_nodes)
    anchors = rng.permutation(n_nodes)[:n_clusters]
    assign[anchors] = np.arange(n_clusters)
    return Partition(assign=tuple(int(a) for a in assign), n_clusters=n_clusters)
