import warnings

import numpy as np
import pytest

from gwcoarsen import (
    AccumulationScaleWarning,
    EmptyCluster,
    Graph,
    Magnitude,
    MassScheme,
    Partition,
    SimilarityKind,
    build_operators,
    coarsen_adjacency,
    coarsen_laplacian,
    coarsen_similarity,
    identity_partition,
    membership_transport_plan,
    sym_eig,
    to_measure_network,
)
from tests.conftest import random_graph, random_net, random_partition


def test_partition_rejects_empty_cluster():
    with pytest.raises(EmptyCluster):
        Partition(assign=(0, 0, 0), n_clusters=2)


def test_partition_relabels_arbitrary_ids():
    p = Partition.from_labels([7, 3, 7, 9])
    assert p.assign == (0, 1, 0, 2)
    assert p.n_clusters == 3


def test_build_operators_toy(k3_net, k3_partition):
    ops = build_operators(k3_partition, k3_net.m)
    assert np.allclose(ops.C_bar_w, [[1, 0, 0], [0, 0.5, 0.5]], atol=1e-15)
    s = 1 / np.sqrt(2)
    assert np.allclose(ops.C_w, [[1, 0, 0], [0, s, s]], atol=1e-15)
    assert np.allclose(ops.cluster_masses, [1 / 3, 2 / 3], atol=1e-15)
    assert np.allclose(ops.C_w @ ops.C_w.T, np.eye(2), atol=1e-12)
    assert np.max(np.abs(ops.C_bar_w.sum(axis=1) - 1.0)) < 1e-12


def test_build_operators_identity_partition():
    m = np.full(4, 0.25)
    ops = build_operators(identity_partition(4), m)
    for mat in (ops.C_p, ops.C_bar_w, ops.C_w):
        assert np.allclose(mat, np.eye(4), atol=1e-15)
    assert np.allclose(ops.cluster_masses, m)


def test_build_operators_all_in_one():
    rng = np.random.default_rng(3)
    m = rng.dirichlet(np.ones(5))
    ops = build_operators(Partition(assign=(0,) * 5, n_clusters=1), m)
    assert np.allclose(ops.C_w, np.sqrt(m)[None, :], atol=1e-15)
    assert np.allclose(ops.C_w @ ops.C_w.T, [[1.0]], atol=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_pseudoinverse_relation_uniform_mass(seed):
    rng = np.random.default_rng(seed)
    n_nodes = int(rng.integers(4, 16))
    p = random_partition(rng, n_nodes, int(rng.integers(2, n_nodes)))
    ops = build_operators(p, np.full(n_nodes, 1.0 / n_nodes))
    assert np.max(np.abs(np.linalg.pinv(ops.C_bar_w) - ops.C_p.T)) < 1e-10


def test_coarsen_adjacency_toy(k3, k3_ops):
    assert np.allclose(coarsen_adjacency(k3, k3_ops), [[0, 2], [2, 2]], atol=1e-15)


def test_coarsen_adjacency_identity(k3):
    ops = build_operators(identity_partition(3), np.full(3, 1 / 3))
    assert np.array_equal(coarsen_adjacency(k3, ops), k3.adjacency())


def test_coarsen_adjacency_all_in_one():
    rng = np.random.default_rng(11)
    g = random_graph(rng, 7)
    ops = build_operators(Partition(assign=(0,) * 7, n_clusters=1), np.full(7, 1 / 7))
    assert np.allclose(
        coarsen_adjacency(g, ops), [[2.0 * g.total_edge_weight()]], atol=1e-12
    )


def test_coarsen_laplacian_toy(k3, k3_ops):
    lap_c, _ = coarsen_laplacian(k3, k3_ops)
    assert np.allclose(lap_c, [[2, -2], [-2, 2]], atol=1e-15)


def test_coarsen_laplacian_identity(k3):
    from gwcoarsen import build_similarity

    ops = build_operators(identity_partition(3), np.full(3, 1 / 3))
    lap_c, norm_lap_c = coarsen_laplacian(k3, ops)
    assert np.allclose(lap_c, build_similarity(k3, SimilarityKind.COMBINATORIAL_LAPLACIAN))
    assert np.allclose(
        norm_lap_c, build_similarity(k3, SimilarityKind.NORMALIZED_LAPLACIAN), atol=1e-12
    )


@pytest.mark.parametrize("seed", range(6))
def test_coarsen_laplacian_row_sums(seed):
    rng = np.random.default_rng(40 + seed)
    n = int(rng.integers(4, 20))
    g = random_graph(rng, n)
    p = random_partition(rng, n, int(rng.integers(2, n)))
    lap_c, _ = coarsen_laplacian(g, build_operators(p, np.full(n, 1.0 / n)))
    assert np.max(np.abs(lap_c.sum(axis=1))) < 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_doubly_weighted_laplacian_identity(seed):
    """C_w calL C_w^T equals the renormalized coarse Laplacian for degree masses."""
    rng = np.random.default_rng(60 + seed)
    n = int(rng.integers(4, 24))
    g = random_graph(rng, n)
    net = to_measure_network(
        g, SimilarityKind.NORMALIZED_LAPLACIAN, MassScheme.DEGREE_PROPORTIONAL
    )
    p = random_partition(rng, n, int(rng.integers(2, n)))
    ops = build_operators(p, net.m)
    lap_c, norm_lap_c = coarsen_laplacian(g, ops)
    via_cw = ops.C_w @ net.S @ ops.C_w.T
    assert np.max(np.abs(via_cw - norm_lap_c)) < 1e-10


def test_coarsen_similarity_toy_values(k3_net, k3_ops):
    avg = coarsen_similarity(k3_net, k3_ops, Magnitude.AVERAGING)
    proj = coarsen_similarity(k3_net, k3_ops, Magnitude.PROJECTION)
    with pytest.warns(AccumulationScaleWarning):
        acc = coarsen_similarity(k3_net, k3_ops, Magnitude.ACCUMULATION)
    r2 = np.sqrt(2.0)
    assert np.max(np.abs(avg.S - [[2, 1], [1, 1.5]])) <= 1e-12
    assert np.max(np.abs(proj.S - [[2, r2], [r2, 3]])) <= 1e-12
    assert np.max(np.abs(acc.S - [[2, 2], [2, 6]])) <= 1e-12
    for net_c in (avg, proj, acc):
        assert np.allclose(net_c.m, [1 / 3, 2 / 3], atol=1e-15)


@pytest.mark.parametrize("seed", range(6))
def test_magnitudes_agree_after_mass_rescaling(seed):
    rng = np.random.default_rng(80 + seed)
    n = int(rng.integers(4, 20))
    net = random_net(rng, n)
    p = random_partition(rng, n, int(rng.integers(2, n)))
    ops = build_operators(p, net.m)
    avg = coarsen_similarity(net, ops, Magnitude.AVERAGING).S
    w = np.diag(net.m)
    rescaled = (
        np.diag(1.0 / ops.cluster_masses)
        @ (ops.C_p @ w @ net.S @ w @ ops.C_p.T)
        @ np.diag(1.0 / ops.cluster_masses)
    )
    assert np.max(np.abs(avg - rescaled)) < 1e-12


@pytest.mark.parametrize("seed", range(8))
def test_poincare_interlacing(seed):
    rng = np.random.default_rng(7_000 + seed)
    n = int(rng.integers(4, 32))
    net = random_net(rng, n)
    k = int(rng.integers(1, n))
    ops = build_operators(random_partition(rng, n, k), net.m)
    root = np.sqrt(net.m)
    u = root[:, None] * net.S * root[None, :]
    lam = sym_eig(u).values
    lam_c = sym_eig(ops.C_w @ u @ ops.C_w.T).values
    for i in range(k):
        assert lam[i] >= lam_c[i] - 1e-9
        assert lam_c[i] >= lam[n - k + i] - 1e-9


@pytest.mark.parametrize("seed", range(6))
def test_projector_idempotent(seed):
    rng = np.random.default_rng(90 + seed)
    n = int(rng.integers(3, 24))
    p = random_partition(rng, n, int(rng.integers(1, n + 1)))
    pi = build_operators(p, np.asarray(np.random.default_rng(seed).dirichlet(np.ones(n)))).projector()
    assert np.linalg.norm(pi @ pi - pi) <= 1e-10


def test_membership_transport_plan_toy(k3_net, k3_ops):
    plan = membership_transport_plan(k3_ops, k3_net.m)
    expect = np.array([[1 / 3, 0], [0, 1 / 3], [0, 1 / 3]])
    assert np.allclose(plan.T, expect, atol=1e-15)
    assert np.allclose(plan.T.sum(axis=1), k3_net.m)
    assert np.allclose(plan.T.sum(axis=0), k3_ops.cluster_masses)


def test_membership_transport_plan_identity_and_single():
    rng = np.random.default_rng(5)
    m = rng.dirichlet(np.ones(4))
    ops = build_operators(identity_partition(4), m)
    assert np.allclose(membership_transport_plan(ops, m).T, np.diag(m))
    ops1 = build_operators(Partition(assign=(0,) * 4, n_clusters=1), m)
    assert np.allclose(membership_transport_plan(ops1, m).T, m[:, None])


def test_accumulation_warning_suppressable(k3_net, k3_ops):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        coarsen_similarity(k3_net, k3_ops, Magnitude.AVERAGING)  # no warning
