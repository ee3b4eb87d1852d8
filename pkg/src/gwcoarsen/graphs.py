"""Graph representation, similarity matrices, and measure networks.

A graph is stored as an edge list (the sparse representation); similarity
matrices are built dense. A measure network is the pair (similarity matrix,
node mass vector) that places a graph on the GW metric space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvariantViolation,
    ParseError,
    ZeroDegreeNode,
    ZeroTotalMass,
)

MASS_SUM_TOL = 1e-12


class SimilarityKind(Enum):
    COMBINATORIAL_LAPLACIAN = "laplacian"
    NORMALIZED_LAPLACIAN = "norm-laplacian"
    SIGNLESS_LAPLACIAN = "signless"
    NORMALIZED_SIGNLESS_LAPLACIAN = "norm-signless"
    RAW_ADJACENCY = "adjacency"


#: Kinds that are positive semi-definite by construction.
PSD_KINDS = frozenset(
    {SimilarityKind.SIGNLESS_LAPLACIAN, SimilarityKind.NORMALIZED_SIGNLESS_LAPLACIAN}
)

NORMALIZED_KINDS = frozenset(
    {SimilarityKind.NORMALIZED_LAPLACIAN, SimilarityKind.NORMALIZED_SIGNLESS_LAPLACIAN}
)


class MassScheme(Enum):
    UNIFORM = "uniform"
    DEGREE_PROPORTIONAL = "degree"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph with optional node masses.

    Edges are (i, j, w) with i < j and w >= 0; the implied adjacency is
    symmetric with a zero diagonal. Use :meth:`from_edges` to normalize raw
    edge lists (orientation, duplicate merging).
    """

    n_nodes: int
    edges: tuple[tuple[int, int, float], ...]
    node_masses: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n_nodes <= 0:
            raise InvariantViolation(f"n_nodes must be positive, got {self.n_nodes}")
        seen = set()
        for i, j, w in self.edges:
            if i == j:
                raise InvariantViolation(f"self-loop on node {i}")
            if not (0 <= i < j < self.n_nodes):
                raise InvariantViolation(
                    f"edge ({i}, {j}) out of order or out of range for n={self.n_nodes}"
                )
            if w < 0:
                raise InvariantViolation(f"edge ({i}, {j}) has negative weight {w}")
            if (i, j) in seen:
                raise InvariantViolation(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        if self.node_masses is not None:
            if len(self.node_masses) != self.n_nodes:
                raise InvariantViolation(
                    f"node_masses has length {len(self.node_masses)}, expected {self.n_nodes}"
                )
            for idx, m in enumerate(self.node_masses):
                if not m > 0:
                    raise InvariantViolation(f"node mass {m} at index {idx} is not positive")

    @classmethod
    def from_edges(
        cls,
        n_nodes: int,
        edges: Iterable[Sequence[float]],
        node_masses: Sequence[float] | None = None,
    ) -> "Graph":
        """Build a graph from a raw edge list, merging duplicates by weight sum."""
        merged: dict[tuple[int, int], float] = {}
        for e in edges:
            if len(e) != 3:
                raise InvariantViolation(f"edge {e!r} is not a (i, j, w) triple")
            i, j, w = int(e[0]), int(e[1]), float(e[2])
            if i == j:
                raise InvariantViolation(f"self-loop on node {i}")
            if i > j:
                i, j = j, i
            merged[(i, j)] = merged.get((i, j), 0.0) + w
        edge_tuple = tuple((i, j, w) for (i, j), w in sorted(merged.items()))
        masses = tuple(float(m) for m in node_masses) if node_masses is not None else None
        return cls(n_nodes=n_nodes, edges=edge_tuple, node_masses=masses)

    def adjacency(self) -> np.ndarray:
        """Dense symmetric adjacency matrix."""
        a = np.zeros((self.n_nodes, self.n_nodes))
        for i, j, w in self.edges:
            a[i, j] = w
            a[j, i] = w
        return a

    def degrees(self) -> np.ndarray:
        """Weighted degree of every node."""
        d = np.zeros(self.n_nodes)
        for i, j, w in self.edges:
            d[i] += w
            d[j] += w
        return d

    def total_edge_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MeasureNetwork:
    """A (similarity matrix, probability mass) pair: one point of the GW space.

    ``psd_checked`` records that the similarity is known positive
    semi-definite (true for the signless Laplacian family by construction).
    """

    S: np.ndarray
    m: np.ndarray
    psd_checked: bool = False

    def __post_init__(self):
        S = _readonly(np.asarray(self.S, dtype=float))
        m = _readonly(np.asarray(self.m, dtype=float))
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "m", m)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise InvariantViolation(f"similarity matrix must be square, got shape {S.shape}")
        if m.shape != (S.shape[0],):
            raise InvariantViolation(
                f"mass vector of length {m.shape} does not match matrix size {S.shape[0]}"
            )
        if not np.array_equal(S, S.T):
            raise InvariantViolation("similarity matrix is not symmetric entrywise")
        if np.any(m <= 0):
            raise InvariantViolation("mass vector has a non-positive entry")
        if abs(float(m.sum()) - 1.0) > MASS_SUM_TOL:
            raise InvariantViolation(f"mass vector sums to {m.sum()!r}, not 1")

    @property
    def size(self) -> int:
        return self.S.shape[0]


def _symmetrize(M: np.ndarray) -> np.ndarray:
    # (M + M.T) / 2 is exactly symmetric entrywise in floating point.
    return (M + M.T) / 2.0


def build_similarity(g: Graph, kind: SimilarityKind) -> np.ndarray:
    """Return the requested similarity matrix of ``g``.

    Raises ZeroDegreeNode for normalized kinds when the graph has an
    isolated node.
    """
    a = g.adjacency()
    d = g.degrees()
    if kind is SimilarityKind.RAW_ADJACENCY:
        return a
    if kind is SimilarityKind.COMBINATORIAL_LAPLACIAN:
        return np.diag(d) - a
    if kind is SimilarityKind.SIGNLESS_LAPLACIAN:
        return np.diag(d) + a
    # Normalized kinds need every degree strictly positive.
    zero = np.flatnonzero(d <= 0)
    if zero.size:
        raise ZeroDegreeNode(int(zero[0]))
    dinv_sqrt = 1.0 / np.sqrt(d)
    norm_adj = _symmetrize(dinv_sqrt[:, None] * a * dinv_sqrt[None, :])
    eye = np.eye(g.n_nodes)
    if kind is SimilarityKind.NORMALIZED_LAPLACIAN:
        return eye - norm_adj
    if kind is SimilarityKind.NORMALIZED_SIGNLESS_LAPLACIAN:
        return eye + norm_adj
    raise ValueError(f"unknown similarity kind {kind!r}")


def node_masses(g: Graph, scheme: MassScheme) -> np.ndarray:
    """Probability masses for the nodes of ``g`` under the given scheme."""
    if scheme is MassScheme.UNIFORM:
        return np.full(g.n_nodes, 1.0 / g.n_nodes)
    if scheme is MassScheme.DEGREE_PROPORTIONAL:
        d = g.degrees()
        total = float(d.sum())
        if total <= 0:
            raise ZeroTotalMass("degree-proportional masses need total edge weight > 0")
        zero = np.flatnonzero(d <= 0)
        if zero.size:
            raise ZeroDegreeNode(int(zero[0]))
        return d / total
    if scheme is MassScheme.EXPLICIT:
        if g.node_masses is None:
            raise InvariantViolation("explicit mass scheme requires node_masses on the graph")
        m = np.asarray(g.node_masses, dtype=float)
        return m / m.sum()
    raise ValueError(f"unknown mass scheme {scheme!r}")


def to_measure_network(
    g: Graph,
    kind: SimilarityKind,
    mass_scheme: MassScheme = MassScheme.UNIFORM,
) -> MeasureNetwork:
    """Turn a graph into a measure network with the chosen similarity and masses."""
    s = build_similarity(g, kind)
    m = node_masses(g, mass_scheme)
    return MeasureNetwork(S=s, m=m, psd_checked=kind in PSD_KINDS)


# ---------------------------------------------------------------------------
# JSON ingestion / emission
# ---------------------------------------------------------------------------


def _graph_from_obj(obj: object, where: str) -> Graph:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object, got {type(obj).__name__}")
    if "n" not in obj:
        raise ParseError(f"{where}: missing required field 'n'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError(f"{where}: field 'n' must be an integer, got {n!r}")
    edges = obj.get("edges", [])
    if not isinstance(edges, list):
        raise ParseError(f"{where}: field 'edges' must be a list")
    for k, e in enumerate(edges):
        if not isinstance(e, list) or len(e) != 3:
            raise ParseError(f"{where}: edges[{k}] must be a [i, j, w] triple, got {e!r}")
    masses = obj.get("masses")
    if masses is not None:
        if not isinstance(masses, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in masses
        ):
            raise ParseError(f"{where}: field 'masses' must be a list of numbers")
    return Graph.from_edges(n, edges, masses)


def load_graph(path: str, format: str = "json") -> Graph:
    """Load a single graph file; see the JSON schema in the README."""
    if format != "json":
        raise ParseError(f"unsupported format {format!r}")
    try:
        with open(path, encoding="utf-8") as f:
            obj = json.load(f)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return _graph_from_obj(obj, path)


def load_collection(path: str, format: str = "json") -> list[Graph]:
    """Load a graph collection, preserving file order."""
    if format != "json":
        raise ParseError(f"unsupported format {format!r}")
    try:
        with open(path, encoding="utf-8") as f:
            obj = json.load(f)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(obj, dict) or "graphs" not in obj:
        raise ParseError(f"{path}: expected an object with a 'graphs' field")
    graphs_field = obj["graphs"]
    if not isinstance(graphs_field, list):
        raise ParseError(f"{path}: 'graphs' must be a list")
    labels = obj.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != len(graphs_field)):
        raise ParseError(f"{path}: 'labels' must be a list matching 'graphs' in length")
    return [
        _graph_from_obj(item, f"{path}: graphs[{k}]") for k, item in enumerate(graphs_field)
    ]


def graph_to_obj(g: Graph) -> dict:
    obj: dict = {"n": g.n_nodes, "edges": [[i, j, w] for i, j, w in g.edges]}
    if g.node_masses is not None:
        obj["masses"] = list(g.node_masses)
    return obj


def save_collection(path: str, graphs: Sequence[Graph], labels: Sequence | None = None) -> None:
    obj: dict = {"graphs": [graph_to_obj(g) for g in graphs]}
    if labels is not None:
        obj["labels"] = list(labels)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, sort_keys=True)
        f.write("\n")
