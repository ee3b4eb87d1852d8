"""Weighted kernel K-means coarsening and a heavy-edge baseline.

A PSD similarity matrix is treated as a kernel, so node-to-center distances
come from the kernel trick; assignments are updated in synchronous batches,
which makes the clustering objective provably non-increasing per iteration.
Minimizing this objective is the same as minimizing the spectral difference
that controls the GW distance bounds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .coarsening import Partition
from .eig import jacobi_eigh
from .errors import DimensionMismatch, InvariantViolation, NotPSD
from .graphs import Graph, MeasureNetwork

PSD_REL_TOL = 1e-6


@dataclass(frozen=True)
class InitPlusPlus:
    """D^2-weighted seeding in kernel space."""

    seed: int = 0


@dataclass(frozen=True)
class InitRandom:
    """Uniform random labels (every cluster forced nonempty)."""

    seed: int = 0


@dataclass(frozen=True)
class InitFromPartition:
    """Refine an existing partition."""

    partition: Partition


KgcInit = InitPlusPlus | InitRandom | InitFromPartition


@dataclass(frozen=True)
class KgcConfig:
    n_clusters: int
    max_iter: int = 100
    init: KgcInit = field(default_factory=InitPlusPlus)
    objective_tol: float = 0.0

    def __post_init__(self):
        if self.n_clusters < 1:
            raise InvariantViolation(f"n_clusters must be >= 1, got {self.n_clusters}")
        if self.max_iter < 1:
            raise InvariantViolation(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass
class KgcResult:
    partition: Partition
    objective_trace: list[float]
    iterations: int
    converged: bool

    def to_obj(self) -> dict:
        return {
            "assign": list(self.partition.assign),
            "n_clusters": self.partition.n_clusters,
            "objective_trace": self.objective_trace,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _psd_guard(net: MeasureNetwork) -> None:
    if net.psd_checked:
        return
    values, _ = jacobi_eigh(net.S, compute_vectors=False)
    lo = float(values.min())
    hi = float(values.max())
    if lo < -PSD_REL_TOL * max(hi, 0.0) or hi < 0.0:
        raise NotPSD(f"kernel matrix is not PSD: eigenvalues span [{lo:.3e}, {hi:.3e}]")
    if lo < 0.0:
        warnings.warn(
            f"kernel matrix has mildly negative eigenvalue {lo:.3e}; "
            "distances are clamped at zero",
            stacklevel=3,
        )


def _distance_matrix(S, m, assign, n):
    """Squared kernel distances of every node to every cluster center, (N, n)."""
    big_n = m.size
    one_hot = np.zeros((n, big_n))
    one_hot[assign, np.arange(big_n)] = 1.0
    c = one_hot @ m
    msum = one_hot @ (S * m[:, None])
    ybar = msum / c[:, None]
    center_sq = np.einsum("ji,ji->j", ybar, one_hot * m[None, :]) / c
    d2 = np.diag(S)[:, None] - 2.0 * ybar.T + center_sq[None, :]
    return np.maximum(d2, 0.0), c


def point_cluster_dist2(net: MeasureNetwork, partition: Partition, i: int, j: int) -> float:
    """Squared kernel distance from node i to the center of cluster j."""
    if partition.n_nodes != net.size:
        raise DimensionMismatch(
            f"partition covers {partition.n_nodes} nodes, network has {net.size}"
        )
    if not 0 <= j < partition.n_clusters:
        raise InvariantViolation(f"cluster id {j} out of range")
    _psd_guard(net)
    assign = np.asarray(partition.assign)
    members = np.flatnonzero(assign == j)
    m = net.m
    s = net.S
    c_j = float(m[members].sum())
    second = 2.0 * float(m[members] @ s[members, i]) / c_j
    third = float(m[members] @ s[np.ix_(members, members)] @ m[members]) / c_j**2
    return max(float(s[i, i]) - second + third, 0.0)


def objective(net: MeasureNetwork, partition: Partition) -> float:
    """Mass-weighted sum of squared distances of nodes to their cluster centers."""
    if partition.n_nodes != net.size:
        raise DimensionMismatch(
            f"partition covers {partition.n_nodes} nodes, network has {net.size}"
        )
    _psd_guard(net)
    assign = np.asarray(partition.assign)
    d2, _ = _distance_matrix(net.S, net.m, assign, partition.n_clusters)
    return float(net.m @ d2[np.arange(net.size), assign])


def trace_objective(net: MeasureNetwork, ops) -> float:
    """Equivalent trace form Tr(U) - Tr(C_w U C_w^T) of the clustering objective."""
    from .spectral import coarse_weighted_similarity, weighted_similarity

    u = weighted_similarity(net)
    u_c = coarse_weighted_similarity(net, ops)
    return float(np.trace(u) - np.trace(u_c))


def _singleton_dist2(S, seed_idx):
    """Kernel distance of every node to the point phi_{seed_idx}."""
    return np.maximum(np.diag(S) - 2.0 * S[seed_idx, :] + S[seed_idx, seed_idx], 0.0)


def init_plusplus(net: MeasureNetwork, n: int, seed: int = 0) -> Partition:
    """K-means++ seeding in kernel space with masses as sampling weights."""
    big_n = net.size
    if not 1 <= n <= big_n:
        raise InvariantViolation(f"n={n} must lie in [1, {big_n}]")
    rng = np.random.default_rng(seed)
    s = net.S
    m = net.m
    seeds = [int(rng.choice(big_n, p=m / m.sum()))]
    d2min = _singleton_dist2(s, seeds[0])
    for _ in range(1, n):
        weights = m * d2min
        weights[seeds] = 0.0
        total = float(weights.sum())
        if total <= 0.0:
            remaining = np.setdiff1d(np.arange(big_n), seeds)
            seeds.append(int(remaining[0]))
        else:
            seeds.append(int(rng.choice(big_n, p=weights / total)))
        d2min = np.minimum(d2min, _singleton_dist2(s, seeds[-1]))
    dist_to_seeds = np.stack([_singleton_dist2(s, idx) for idx in seeds], axis=1)
    assign = np.argmin(dist_to_seeds, axis=1)
    assign[seeds] = np.arange(n)
    return Partition(assign=tuple(int(a) for a in assign), n_clusters=n)


def _init_random(net: MeasureNetwork, n: int, seed: int) -> Partition:
    rng = np.random.default_rng(seed)
    assign = rng.integers(0, n, size=net.size)
    anchors = rng.permutation(net.size)[:n]
    assign[anchors] = np.arange(n)
    return Partition(assign=tuple(int(a) for a in assign), n_clusters=n)


def _initial_partition(net: MeasureNetwork, cfg: KgcConfig) -> Partition:
    if isinstance(cfg.init, InitPlusPlus):
        return init_plusplus(net, cfg.n_clusters, cfg.init.seed)
    if isinstance(cfg.init, InitRandom):
        return _init_random(net, cfg.n_clusters, cfg.init.seed)
    if isinstance(cfg.init, InitFromPartition):
        p = cfg.init.partition
        if p.n_clusters != cfg.n_clusters:
            raise InvariantViolation(
                f"initial partition has {p.n_clusters} clusters, config wants "
                f"{cfg.n_clusters}"
            )
        if p.n_nodes != net.size:
            raise DimensionMismatch(
                f"initial partition covers {p.n_nodes} nodes, network has {net.size}"
            )
        return p
    raise ValueError(f"unknown init {cfg.init!r}")


def _repair_empty(d2, assign, n):
    """Refill emptied clusters with the nodes farthest from their centers."""
    counts = np.bincount(assign, minlength=n)
    own_dist = d2[np.arange(assign.size), assign].copy()
    for j in np.flatnonzero(counts == 0):
        movable = counts[assign] > 1
        if not movable.any():
            raise InvariantViolation("cannot repair empty cluster: all clusters singletons")
        candidates = np.where(movable, own_dist, -np.inf)
        pick = int(np.argmax(candidates))
        counts[assign[pick]] -= 1
        assign[pick] = j
        counts[j] += 1
        own_dist[pick] = 0.0
    return assign


def run_kgc(net: MeasureNetwork, cfg: KgcConfig) -> KgcResult:
    """Batch weighted kernel K-means; stops when the partition is invariant."""
    if cfg.n_clusters > net.size:
        raise InvariantViolation(
            f"n_clusters={cfg.n_clusters} exceeds network size {net.size}"
        )
    _psd_guard(net)
    s, m, n = net.S, net.m, cfg.n_clusters
    assign = np.asarray(_initial_partition(net, cfg).assign)
    d2, _ = _distance_matrix(s, m, assign, n)
    idx = np.arange(net.size)
    trace = [float(m @ d2[idx, assign])]
    iterations = 0
    converged = False
    for t in range(1, cfg.max_iter + 1):
        iterations = t
        new_assign = np.argmin(d2, axis=1)
        new_assign = _repair_empty(d2, new_assign, n)
        if np.array_equal(new_assign, assign):
            converged = True
            break
        assign = new_assign
        d2, _ = _distance_matrix(s, m, assign, n)
        trace.append(float(m @ d2[idx, assign]))
        if cfg.objective_tol > 0.0 and trace[-2] - trace[-1] <= cfg.objective_tol:
            break
    partition = Partition(assign=tuple(int(a) for a in assign), n_clusters=n)
    return KgcResult(
        partition=partition,
        objective_trace=trace,
        iterations=iterations,
        converged=converged,
    )


def refine(net: MeasureNetwork, initial: Partition, cfg: KgcConfig) -> KgcResult:
    """Improve an existing partition with KGC; the objective cannot increase."""
    if cfg.n_clusters != initial.n_clusters:
        raise InvariantViolation(
            f"config wants {cfg.n_clusters} clusters, initial partition has "
            f"{initial.n_clusters}"
        )
    warm = KgcConfig(
        n_clusters=initial.n_clusters,
        max_iter=cfg.max_iter,
        init=InitFromPartition(initial),
        objective_tol=cfg.objective_tol,
    )
    return run_kgc(net, warm)


def heavy_edge_baseline(g: Graph, n: int) -> Partition:
    """Contract the heaviest edge until n supernodes remain.

    Ties break toward the smallest supernode index pair; when crossing edges
    run out before n clusters remain, the two lightest clusters are merged.
    """
    if not 1 <= n < g.n_nodes:
        raise InvariantViolation(f"n={n} must lie in [1, {g.n_nodes})")
    members: dict[int, list[int]] = {i: [i] for i in range(g.n_nodes)}
    weights: dict[int, dict[int, float]] = {i: {} for i in range(g.n_nodes)}
    for i, j, w in g.edges:
        if w <= 0:
            continue
        weights[i][j] = weights[i].get(j, 0.0) + w
        weights[j][i] = weights[j].get(i, 0.0) + w
    masses = (
        np.asarray(g.node_masses, dtype=float)
        if g.node_masses is not None
        else np.ones(g.n_nodes)
    )

    def merge(ra: int, rb: int) -> None:
        # ra < rb; rb folds into ra.
        members[ra].extend(members.pop(rb))
        for nb, w in weights.pop(rb).items():
            if nb == ra:
                continue
            weights[nb].pop(rb, None)
            weights[ra][nb] = weights[ra].get(nb, 0.0) + w
            weights[nb][ra] = weights[ra][nb]
        weights[ra].pop(rb, None)

    while len(members) > n:
        best: tuple[int, int] | None = None
        best_w = 0.0
        for ra in sorted(weights):
            for rb in sorted(weights[ra]):
                if rb <= ra:
                    continue
                w = weights[ra][rb]
                if w > best_w or (w == best_w and best is not None and (ra, rb) < best):
                    best = (ra, rb)
                    best_w = w
        if best is None:
            reps = sorted(members, key=lambda r: (float(masses[members[r]].sum()), r))
            best = (min(reps[0], reps[1]), max(reps[0], reps[1]))
        merge(*best)

    labels = np.empty(g.n_nodes, dtype=int)
    for cluster_id, rep in enumerate(sorted(members)):
        labels[members[rep]] = cluster_id
    return Partition(assign=tuple(int(a) for a in labels), n_clusters=n)
