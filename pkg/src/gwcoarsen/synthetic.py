"""Seeded synthetic graph generators (Erdos-Renyi and stochastic block)."""

from __future__ import annotations

import numpy as np

from .graphs import Graph


def _finalize_edges(n, pairs, rng, weighted, min_degree_one):
    edges = {pair: 1.0 for pair in pairs}
    if weighted:
        for pair in sorted(edges):
            edges[pair] = float(rng.uniform(0.5, 1.5))
    if min_degree_one:
        degree = np.zeros(n)
        for (i, j), w in edges.items():
            degree[i] += w
            degree[j] += w
        for i in np.flatnonzero(degree == 0):
            other = int(rng.integers(0, n - 1))
            if other >= i:
                other += 1
            pair = (min(i, int(other)), max(i, int(other)))
            edges[pair] = float(rng.uniform(0.5, 1.5)) if weighted else 1.0
    return [(i, j, w) for (i, j), w in sorted(edges.items())]


def erdos_renyi(
    n: int,
    p: float,
    rng: np.random.Generator,
    weighted: bool = False,
    min_degree_one: bool = True,
) -> Graph:
    """G(n, p) with optional uniform edge weights; isolated nodes get one edge."""
    mask = rng.random((n, n)) < p
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if mask[i, j]]
    return Graph.from_edges(n, _finalize_edges(n, pairs, rng, weighted, min_degree_one))


def stochastic_block(
    sizes: list[int],
    p_in: float,
    p_out: float,
    rng: np.random.Generator,
    weighted: bool = False,
    min_degree_one: bool = True,
) -> Graph:
    """Planted-partition graph with within/between block edge probabilities."""
    n = int(sum(sizes))
    block = np.repeat(np.arange(len(sizes)), sizes)
    draw = rng.random((n, n))
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            prob = p_in if block[i] == block[j] else p_out
            if draw[i, j] < prob:
                pairs.append((i, j))
    return Graph.from_edges(n, _finalize_edges(n, pairs, rng, weighted, min_degree_one))


def synthetic_collection(
    n_graphs: int,
    seed: int,
    model: str = "er",
    n_min: int = 8,
    n_max: int = 16,
    weighted: bool = True,
) -> list[Graph]:
    """A seeded list of graphs with sizes drawn uniformly from [n_min, n_max]."""
    rng = np.random.default_rng(seed)
    graphs = []
    for _ in range(n_graphs):
        n = int(rng.integers(n_min, n_max + 1))
        if model == "er":
            p = float(rng.uniform(0.25, 0.55))
            graphs.append(erdos_renyi(n, p, rng, weighted=weighted))
        elif model == "sbm":
            k = 2 if n < 12 else 3
            base = n // k
            sizes = [base] * (k - 1) + [n - base * (k - 1)]
            graphs.append(stochastic_block(sizes, 0.6, 0.1, rng, weighted=weighted))
        else:
            raise ValueError(f"unknown model {model!r}")
    return graphs
