"""Transport plans and an exact solver for the linear OT subproblem.

The solver is a transportation simplex: northwest-corner start, dual (u, v)
pricing over the basis tree, and cycle pivoting. It returns an exact vertex
of the transportation polytope, which is what the conditional-gradient GW
solver needs for its direction finding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateMarginal,
    DimensionMismatch,
    InfeasiblePlan,
    InvariantViolation,
    SizeLimit,
)

MARGINAL_TOL = 1e-8
EXACT_SIZE_LIMIT = 512


@dataclass(frozen=True)
class TransportPlan:
    """Nonnegative coupling with prescribed row and column marginals."""

    T: np.ndarray
    source_mass: np.ndarray
    target_mass: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.T, dtype=float)
        src = np.asarray(self.source_mass, dtype=float)
        tgt = np.asarray(self.target_mass, dtype=float)
        if t.ndim != 2 or t.shape != (src.size, tgt.size):
            raise DimensionMismatch(
                f"plan shape {t.shape} does not match marginals ({src.size}, {tgt.size})"
            )
        if float(t.min(initial=0.0)) < -1e-12:
            raise InvariantViolation("transport plan has a negative entry")
        t = np.maximum(t, 0.0)
        row_err = float(np.max(np.abs(t.sum(axis=1) - src), initial=0.0))
        col_err = float(np.max(np.abs(t.sum(axis=0) - tgt), initial=0.0))
        if row_err > MARGINAL_TOL or col_err > MARGINAL_TOL:
            raise InfeasiblePlan(
                f"marginal mismatch (rows {row_err:.3e}, cols {col_err:.3e})"
            )
        for name, arr in (("T", t), ("source_mass", src), ("target_mass", tgt)):
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.T.shape


def product_plan(source_mass: np.ndarray, target_mass: np.ndarray) -> TransportPlan:
    """The independent coupling m1 m2^T."""
    src = np.asarray(source_mass, dtype=float)
    tgt = np.asarray(target_mass, dtype=float)
    return TransportPlan(T=np.outer(src, tgt), source_mass=src, target_mass=tgt)


def diagonal_plan(mass: np.ndarray) -> TransportPlan:
    """The identity coupling diag(m) of a network with itself."""
    m = np.asarray(mass, dtype=float)
    return TransportPlan(T=np.diag(m), source_mass=m, target_mass=m)


def random_feasible_plan(
    source_mass: np.ndarray, target_mass: np.ndarray, seed: int
) -> TransportPlan:
    """A seeded random coupling, built by scaling a positive matrix to the marginals."""
    src = np.asarray(source_mass, dtype=float)
    tgt = np.asarray(target_mass, dtype=float)
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.5, 1.5, size=(src.size, tgt.size))
    for _ in range(5000):
        t *= (src / t.sum(axis=1))[:, None]
        t *= (tgt / t.sum(axis=0))[None, :]
        if float(np.max(np.abs(t.sum(axis=1) - src))) < 1e-14:
            break
    t *= (src / t.sum(axis=1))[:, None]
    return TransportPlan(T=t, source_mass=src, target_mass=tgt)


def _northwest_corner(a: np.ndarray, b: np.ndarray):
    n1, n2 = a.size, b.size
    t = np.zeros((n1, n2))
    ra = a.copy()
    rb = b.copy()
    cells: list[tuple[int, int]] = []
    i = j = 0
    for _ in range(n1 + n2 - 1):
        cells.append((i, j))
        amt = min(ra[i], rb[j])
        t[i, j] = amt
        ra[i] -= amt
        rb[j] -= amt
        if i == n1 - 1:
            j += 1
        elif j == n2 - 1:
            i += 1
        elif ra[i] <= rb[j]:
            i += 1
        else:
            j += 1
    return t, cells


def _compute_duals(cost, adj_rows, adj_cols, n1, n2):
    u = np.full(n1, np.nan)
    v = np.full(n2, np.nan)
    u[0] = 0.0
    stack = [(True, 0)]
    while stack:
        is_row, k = stack.pop()
        if is_row:
            for j in adj_rows[k]:
                if np.isnan(v[j]):
                    v[j] = cost[k, j] - u[k]
                    stack.append((False, j))
        else:
            for i in adj_cols[k]:
                if np.isnan(u[i]):
                    u[i] = cost[i, k] - v[k]
                    stack.append((True, i))
    return u, v


def _tree_path(adj_rows, adj_cols, start_row, end_col, n1):
    """Node path (rows < n1, cols >= n1) from start_row to end_col in the basis tree."""
    start = start_row
    goal = n1 + end_col
    parent = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            if node < n1:
                neighbors = (n1 + j for j in adj_rows[node])
            else:
                neighbors = iter(adj_cols[node - n1])
            for nb in neighbors:
                if nb not in parent:
                    parent[nb] = node
                    if nb == goal:
                        path = [nb]
                        while parent[path[-1]] is not None:
                            path.append(parent[path[-1]])
                        return path[::-1]
                    nxt.append(nb)
        frontier = nxt
    raise RuntimeError("basis lost its spanning-tree structure")


def solve_inner_ot(
    cost: np.ndarray,
    source_mass: np.ndarray,
    target_mass: np.ndarray,
    *,
    size_limit: int = EXACT_SIZE_LIMIT,
) -> TransportPlan:
    """Exact optimum of  min_T <cost, T>  over couplings of the two masses.

    Returns a vertex of the transportation polytope. Sizes above
    ``size_limit`` are refused rather than solved approximately.
    """
    c = np.asarray(cost, dtype=float)
    a = np.asarray(source_mass, dtype=float)
    b = np.asarray(target_mass, dtype=float)
    n1, n2 = a.size, b.size
    if c.shape != (n1, n2):
        raise DimensionMismatch(f"cost shape {c.shape} does not match ({n1}, {n2})")
    if not np.all(np.isfinite(c)):
        raise InvariantViolation("cost matrix has non-finite entries")
    if max(n1, n2) > size_limit:
        raise SizeLimit(f"exact OT limited to {size_limit}, got {max(n1, n2)}")
    if np.any(a <= 0) or np.any(b <= 0):
        raise DegenerateMarginal("marginals must be strictly positive")
    if abs(float(a.sum()) - float(b.sum())) > 1e-9 * max(1.0, float(a.sum())):
        raise InfeasiblePlan(
            f"marginal totals differ: {a.sum()!r} vs {b.sum()!r}"
        )

    t, cells = _northwest_corner(a, b)
    adj_rows: list[set[int]] = [set() for _ in range(n1)]
    adj_cols: list[set[int]] = [set() for _ in range(n2)]
    for i, j in cells:
        adj_rows[i].add(j)
        adj_cols[j].add(i)
    basic = np.zeros((n1, n2), dtype=bool)
    bi, bj = zip(*cells)
    basic[list(bi), list(bj)] = True

    opt_tol = 1e-12 * (1.0 + float(np.max(np.abs(c))))
    max_pivots = 1000 + 20 * n1 * n2
    bland = False
    for pivot in range(2 * max_pivots):
        if pivot >= max_pivots:
            bland = True
        u, v = _compute_duals(c, adj_rows, adj_cols, n1, n2)
        reduced = c - u[:, None] - v[None, :]
        reduced[basic] = 0.0
        if bland:
            neg = np.argwhere(reduced < -opt_tol)
            if neg.size == 0:
                break
            ei, ej = int(neg[0, 0]), int(neg[0, 1])
        else:
            flat = int(np.argmin(reduced))
            ei, ej = divmod(flat, n2)
            if reduced[ei, ej] >= -opt_tol:
                break
        # Cycle: entering cell plus the tree path from its column back to its row.
        path = _tree_path(adj_rows, adj_cols, ei, ej, n1)
        cycle = [(ei, ej)]
        for k in range(len(path) - 1, 0, -1):
            x, y = path[k], path[k - 1]
            cell = (y, x - n1) if x >= n1 else (x, y - n1)
            cycle.append(cell)
        minus = cycle[1::2]
        theta = min(t[cell] for cell in minus)
        leaving = min(cell for cell in minus if t[cell] <= theta)
        for k, cell in enumerate(cycle):
            t[cell] += theta if k % 2 == 0 else -theta
        t[leaving] = 0.0
        basic[leaving] = False
        adj_rows[leaving[0]].discard(leaving[1])
        adj_cols[leaving[1]].discard(leaving[0])
        basic[ei, ej] = True
        adj_rows[ei].add(ej)
        adj_cols[ej].add(ei)
    else:
        raise RuntimeError("transportation simplex failed to terminate")

    return TransportPlan(T=np.maximum(t, 0.0), source_mass=a, target_mass=b)
