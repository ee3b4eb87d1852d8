"""Partitions, coarsening matrices, and coarsened objects.

Three coarsening-matrix variants are supported for an n-cluster partition of
N nodes, all of size n x N:

* accumulation  C_p      -- 0/1 membership matrix;
* averaging     C_bar_w  -- diag(c)^-1 C_p W, mass-weighted row averages;
* projection    C_w      -- diag(c)^-1/2 C_p W^1/2, orthonormal rows.

Here W = diag(m) holds the node masses and c_k is the total mass of cluster k.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (
    AccumulationScaleWarning,
    DimensionMismatch,
    EmptyCluster,
    InvariantViolation,
    ZeroDegreeSupernode,
)
from .graphs import Graph, MeasureNetwork


class Magnitude(Enum):
    ACCUMULATION = "accumulation"
    AVERAGING = "averaging"
    PROJECTION = "projection"


@dataclass(frozen=True)
class Partition:
    """Cluster assignment: ``assign[i]`` is the cluster id of node i.

    Ids must be contiguous in [0, n_clusters) with no empty cluster.
    """

    assign: tuple[int, ...]
    n_clusters: int

    def __post_init__(self):
        object.__setattr__(self, "assign", tuple(int(a) for a in self.assign))
        n = self.n_clusters
        if not 1 <= n <= len(self.assign):
            raise InvariantViolation(
                f"n_clusters={n} invalid for {len(self.assign)} nodes"
            )
        counts = np.bincount(np.asarray(self.assign), minlength=n)
        if np.any(np.asarray(self.assign) < 0) or np.any(np.asarray(self.assign) >= n):
            raise InvariantViolation("cluster id out of range")
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            raise EmptyCluster(f"cluster {int(empty[0])} has no members")

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        """Re-index arbitrary labels to contiguous ids ordered by first appearance."""
        remap: dict[int, int] = {}
        assign = []
        for lab in labels:
            if lab not in remap:
                remap[lab] = len(remap)
            assign.append(remap[lab])
        return cls(assign=tuple(assign), n_clusters=len(remap))

    @property
    def n_nodes(self) -> int:
        return len(self.assign)

    def identity(self) -> bool:
        return self.n_clusters == self.n_nodes

    def membership_matrix(self) -> np.ndarray:
        """Dense 0/1 membership matrix C_p of shape (n_clusters, n_nodes)."""
        cp = np.zeros((self.n_clusters, self.n_nodes))
        cp[np.asarray(self.assign), np.arange(self.n_nodes)] = 1.0
        return cp


def identity_partition(n: int) -> Partition:
    return Partition(assign=tuple(range(n)), n_clusters=n)


@dataclass(frozen=True)
class CoarseningOperators:
    """The three coarsening matrices plus cluster masses for one partition."""

    partition: Partition
    masses: np.ndarray           # original node masses m
    C_p: np.ndarray              # accumulation, 0/1
    C_bar_w: np.ndarray          # averaging
    C_w: np.ndarray              # projection (orthonormal rows)
    cluster_masses: np.ndarray   # c = C_p m

    @property
    def n_clusters(self) -> int:
        return self.partition.n_clusters

    @property
    def n_nodes(self) -> int:
        return self.partition.n_nodes

    def projector(self) -> np.ndarray:
        """The N x N projection Pi_w = C_w^T C_w."""
        return self.C_w.T @ self.C_w


def build_operators(p: Partition, m: np.ndarray) -> CoarseningOperators:
    """Construct C_p, C_bar_w, C_w, and cluster masses for partition ``p``."""
    m = np.asarray(m, dtype=float)
    if m.shape != (p.n_nodes,):
        raise DimensionMismatch(
            f"mass vector of length {m.shape} does not match {p.n_nodes} nodes"
        )
    if np.any(m <= 0):
        raise InvariantViolation("node masses must be positive")
    cp = p.membership_matrix()
    c = cp @ m
    c_bar_w = (cp * m[None, :]) / c[:, None]
    c_w = (cp * np.sqrt(m)[None, :]) / np.sqrt(c)[:, None]
    return CoarseningOperators(
        partition=p, masses=m, C_p=cp, C_bar_w=c_bar_w, C_w=c_w, cluster_masses=c
    )


def coarsen_adjacency(g: Graph, ops: CoarseningOperators) -> np.ndarray:
    """A^(c) = C_p A C_p^T; the diagonal accumulates intra-cluster weight."""
    if ops.n_nodes != g.n_nodes:
        raise DimensionMismatch(
            f"operators built for {ops.n_nodes} nodes, graph has {g.n_nodes}"
        )
    return ops.C_p @ g.adjacency() @ ops.C_p.T


def coarsen_laplacian(g: Graph, ops: CoarseningOperators) -> tuple[np.ndarray, np.ndarray]:
    """Coarsened combinatorial and normalized Laplacians (L^(c), calL^(c)).

    L^(c) = C_p L C_p^T. The normalized version is built from the coarsened
    degree matrix; when the node masses are degree-proportional it also equals
    C_w calL C_w^T (the doubly-weighted Laplacian identity), which is verified
    here whenever it applies.
    """
    if ops.n_nodes != g.n_nodes:
        raise DimensionMismatch(
            f"operators built for {ops.n_nodes} nodes, graph has {g.n_nodes}"
        )
    a = g.adjacency()
    d = g.degrees()
    lap = np.diag(d) - a
    lap_c = ops.C_p @ lap @ ops.C_p.T
    a_c = ops.C_p @ a @ ops.C_p.T
    d_c = a_c.sum(axis=1)
    zero = np.flatnonzero(d_c <= 0)
    if zero.size:
        raise ZeroDegreeSupernode(f"supernode {int(zero[0])} has zero degree")
    inv_sqrt = 1.0 / np.sqrt(d_c)
    norm_lap_c = inv_sqrt[:, None] * lap_c * inv_sqrt[None, :]
    norm_lap_c = (norm_lap_c + norm_lap_c.T) / 2.0

    total = float(d.sum())
    if total > 0 and np.allclose(ops.masses, d / total, rtol=0.0, atol=1e-12):
        from .graphs import SimilarityKind, build_similarity

        norm_lap = build_similarity(g, SimilarityKind.NORMALIZED_LAPLACIAN)
        via_cw = ops.C_w @ norm_lap @ ops.C_w.T
        if np.max(np.abs(via_cw - norm_lap_c)) > 1e-10:
            raise InvariantViolation(
                "doubly-weighted Laplacian identity failed beyond 1e-10"
            )
    return lap_c, norm_lap_c


def coarsen_similarity(
    net: MeasureNetwork, ops: CoarseningOperators, magnitude: Magnitude
) -> MeasureNetwork:
    """Coarsen a measure network; supernode masses are the cluster masses.

    Accumulation output has the wrong entry scale for GW comparisons against
    the original network and triggers :class:`AccumulationScaleWarning`.
    """
    if ops.n_nodes != net.size:
        raise DimensionMismatch(
            f"operators built for {ops.n_nodes} nodes, network has {net.size}"
        )
    if magnitude is Magnitude.ACCUMULATION:
        mat = ops.C_p
        warnings.warn(
            "accumulation-magnitude coarse similarity is not GW-comparable "
            "to the original network",
            AccumulationScaleWarning,
            stacklevel=2,
        )
    elif magnitude is Magnitude.AVERAGING:
        mat = ops.C_bar_w
    elif magnitude is Magnitude.PROJECTION:
        mat = ops.C_w
    else:
        raise ValueError(f"unknown magnitude {magnitude!r}")
    s_c = mat @ net.S @ mat.T
    s_c = (s_c + s_c.T) / 2.0
    return MeasureNetwork(S=s_c, m=ops.cluster_masses, psd_checked=net.psd_checked)


def membership_transport_plan(ops: CoarseningOperators, m: np.ndarray):
    """The canonical N x n coupling T = W C_p^T between a network and its coarsening."""
    from .ot import TransportPlan

    m = np.asarray(m, dtype=float)
    if m.shape != (ops.n_nodes,):
        raise DimensionMismatch(
            f"mass vector of length {m.shape} does not match {ops.n_nodes} nodes"
        )
    if not np.array_equal(m, ops.masses):
        raise InvariantViolation("operators were built from a different mass vector")
    t = ops.C_p.T * m[:, None]
    return TransportPlan(T=t, source_mass=m, target_mass=ops.cluster_masses)


def partition_to_obj(p: Partition) -> dict:
    return {"assign": list(p.assign)}


def partition_from_obj(obj: dict, where: str = "partition") -> Partition:
    from .errors import ParseError

    if not isinstance(obj, dict) or "assign" not in obj:
        raise ParseError(f"{where}: expected an object with an 'assign' field")
    assign = obj["assign"]
    if not isinstance(assign, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in assign
    ):
        raise ParseError(f"{where}: 'assign' must be a list of integers")
    return Partition.from_labels(assign)
