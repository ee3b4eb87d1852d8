"""Spectral difference and the single- and pair-graph GW distance bounds.

All bounds are stated on U = W^1/2 S W^1/2 and its coarsened counterpart
U^(c) = C_w U C_w^T; eigenvalue interlacing makes every term of the spectral
difference nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coarsening import (
    CoarseningOperators,
    Magnitude,
    coarsen_similarity,
    membership_transport_plan,
)
from .eig import Spectrum, sym_eig
from .errors import InfeasiblePlan, InvariantViolation, NotPSD, ZeroEigenvalue
from .graphs import MeasureNetwork
from .gw import GwConfig, GWResult, gw_cost, solve_gw
from .ot import TransportPlan

#: Hard PSD rejection threshold: smallest eigenvalue below -1e-6 * largest.
PSD_REL_TOL = 1e-6


def weighted_similarity(net: MeasureNetwork) -> np.ndarray:
    """U = W^1/2 S W^1/2 for the network's masses."""
    root = np.sqrt(net.m)
    u = root[:, None] * net.S * root[None, :]
    return (u + u.T) / 2.0


def coarse_weighted_similarity(net: MeasureNetwork, ops: CoarseningOperators) -> np.ndarray:
    """U^(c) = C_w U C_w^T."""
    u_c = ops.C_w @ weighted_similarity(net) @ ops.C_w.T
    return (u_c + u_c.T) / 2.0


def _psd_spectrum(u: np.ndarray) -> Spectrum:
    spec = sym_eig(u)
    lo = float(spec.values[-1])
    hi = float(spec.values[0])
    if lo < -PSD_REL_TOL * max(hi, 0.0) or hi < 0.0:
        raise NotPSD(
            f"similarity is not PSD: eigenvalues span [{lo:.3e}, {hi:.3e}]"
        )
    return spec


def _clamped(values: np.ndarray) -> np.ndarray:
    # Mild negative eigenvalues are floating-point noise on PSD inputs.
    return np.maximum(values, 0.0)


@dataclass(frozen=True)
class SpectralDifference:
    """Delta = sum_i (lambda_i - lambda^(c)_i) plus its equivalent trace form."""

    delta: float
    trace_form: float
    lam: Spectrum
    lam_c: Spectrum


def spectral_difference(net: MeasureNetwork, ops: CoarseningOperators) -> SpectralDifference:
    """Coarsening-dependent part of the single-graph bound.

    Also evaluates the trace form Tr(U) - Tr(U^(c)) - sum_{i>n} lambda_i and
    verifies the two agree to 1e-9.
    """
    u = weighted_similarity(net)
    u_c = coarse_weighted_similarity(net, ops)
    lam = _psd_spectrum(u)
    lam_c = sym_eig(u_c)
    n = ops.n_clusters
    delta = float(np.sum(lam.values[:n] - lam_c.values))
    trace_form = float(np.trace(u) - np.trace(u_c) - np.sum(lam.values[n:]))
    if abs(delta - trace_form) > 1e-9:
        raise InvariantViolation(
            f"spectral difference {delta!r} disagrees with trace form {trace_form!r}"
        )
    return SpectralDifference(delta=delta, trace_form=trace_form, lam=lam, lam_c=lam_c)


def _c_un(values: np.ndarray, n: int) -> float:
    """C_{U,n} = sum_{i<=n} lam_i (lam_i - lam_{N-n+i}) + sum_{i>n} lam_i^2."""
    big_n = values.size
    head = values[:n] * (values[:n] - values[big_n - n :])
    return float(np.sum(head) + np.sum(values[n:] ** 2))


def _c_uvn(lam: np.ndarray, nu: np.ndarray, n: int) -> float:
    """C_{U,V,n} = sum_{i<=n} lam_i (nu_i - nu_{N-i+1}) + sum_{i>n} lam_i nu_i."""
    big_n = lam.size
    head = lam[:n] * (nu[:n] - nu[::-1][:n])
    return float(np.sum(head) + np.sum(lam[n:] * nu[n:]))


@dataclass
class SingleBoundReport:
    """Single-graph bound: GW_2^2(G, G^(c)) <= lambda_{N-n+1} Delta + C_{U,n}."""

    lam: Spectrum
    lam_c: Spectrum
    delta: float
    c_un: float
    bound_rhs: float
    membership_cost: float
    solver_cost: float | None
    gap: float

    def to_obj(self) -> dict:
        return {
            "lambda": self.lam.values.tolist(),
            "lambda_coarse": self.lam_c.values.tolist(),
            "delta": self.delta,
            "c_un": self.c_un,
            "bound_rhs": self.bound_rhs,
            "membership_cost": self.membership_cost,
            "solver_cost": self.solver_cost,
            "gap": self.gap,
        }


def bound_single(
    net: MeasureNetwork,
    ops: CoarseningOperators,
    solver_cfg: GwConfig | None = None,
) -> SingleBoundReport:
    """Evaluate the single-graph bound and the membership-plan cost.

    The membership cost I1 - I1' is realized as the GW cost of the coupling
    W C_p^T against the averaging coarsening and cross-checked against
    ||U - Pi_w U Pi_w||_F^2. When a solver config is given, the coarse
    network is also solved (membership warm start) for a realized value.
    """
    sd = spectral_difference(net, ops)
    n = ops.n_clusters
    big_n = net.size
    vals = _clamped(sd.lam.values)
    c_un = _c_un(vals, n)
    bound_rhs = float(vals[big_n - n] * sd.delta + c_un)

    coarse = coarsen_similarity(net, ops, Magnitude.AVERAGING)
    plan = membership_transport_plan(ops, net.m)
    membership_cost = gw_cost(net, coarse, plan)
    u = weighted_similarity(net)
    pi = ops.projector()
    residual = u - pi @ u @ pi
    crosscheck = float(np.sum(residual * residual))
    if abs(membership_cost - crosscheck) > 1e-9:
        raise InvariantViolation(
            f"membership cost {membership_cost!r} disagrees with projector "
            f"residual {crosscheck!r}"
        )

    solver_cost: float | None = None
    if solver_cfg is not None:
        cfg = GwConfig(
            max_iter=solver_cfg.max_iter,
            tol=solver_cfg.tol,
            restarts=solver_cfg.restarts,
            init=plan,
            seed=solver_cfg.seed,
        )
        solver_cost = solve_gw(net, coarse, cfg).value
    realized = membership_cost if solver_cost is None else solver_cost
    return SingleBoundReport(
        lam=sd.lam,
        lam_c=sd.lam_c,
        delta=sd.delta,
        c_un=c_un,
        bound_rhs=bound_rhs,
        membership_cost=membership_cost,
        solver_cost=solver_cost,
        gap=float(bound_rhs - realized),
    )


@dataclass
class PairBoundReport:
    """Pair bound: |GW_2^2(G1c, G2c) - GW_2^2(G1, G2)| <= max(branch1, branch2)."""

    delta_1: float
    delta_2: float
    lam_1: Spectrum
    lam_2: Spectrum
    nu_1: Spectrum
    nu_2: Spectrum
    c_un_1: float
    c_un_2: float
    c_uv_1: float
    c_uv_2: float
    branch_spectral: float
    branch_transport: float
    bound_rhs: float
    lhs: float | None

    def to_obj(self) -> dict:
        return {
            "delta_1": self.delta_1,
            "delta_2": self.delta_2,
            "nu_1": self.nu_1.values.tolist(),
            "nu_2": self.nu_2.values.tolist(),
            "c_un_1": self.c_un_1,
            "c_un_2": self.c_un_2,
            "c_uv_1": self.c_uv_1,
            "c_uv_2": self.c_uv_2,
            "branch_spectral": self.branch_spectral,
            "branch_transport": self.branch_transport,
            "bound_rhs": self.bound_rhs,
            "lhs": self.lhs,
        }


def bound_pair(
    net1: MeasureNetwork,
    ops1: CoarseningOperators,
    net2: MeasureNetwork,
    ops2: CoarseningOperators,
    plan: TransportPlan,
    gw_value_original: float | None = None,
    gw_value_coarsened: float | None = None,
) -> PairBoundReport:
    """Evaluate the pair bound given a coupling between the original graphs.

    ``plan`` should be the (approximately) optimal plan for GW(G1, G2); the
    spectra of V1 = P U2 P^T and V2 = P^T U1 P are taken from its normalized
    form P = W1^-1/2 T W2^-1/2. When both realized squared distances are
    supplied, their absolute difference is reported as the bound's lhs.
    """
    m1, m2 = net1.m, net2.m
    row_err = float(np.max(np.abs(plan.T.sum(axis=1) - m1)))
    col_err = float(np.max(np.abs(plan.T.sum(axis=0) - m2)))
    if plan.shape != (m1.size, m2.size) or row_err > 1e-8 or col_err > 1e-8:
        raise InfeasiblePlan(
            f"plan is not a coupling of the two networks "
            f"(rows {row_err:.3e}, cols {col_err:.3e})"
        )
    sd1 = spectral_difference(net1, ops1)
    sd2 = spectral_difference(net2, ops2)
    lam1 = _clamped(sd1.lam.values)
    lam2 = _clamped(sd2.lam.values)
    n1, n2 = ops1.n_clusters, ops2.n_clusters
    big_n1, big_n2 = net1.size, net2.size

    p = plan.T / np.sqrt(m1)[:, None] / np.sqrt(m2)[None, :]
    u1 = weighted_similarity(net1)
    u2 = weighted_similarity(net2)
    v1 = p @ u2 @ p.T
    v2 = p.T @ u1 @ p
    nu1 = sym_eig((v1 + v1.T) / 2.0)
    nu2 = sym_eig((v2 + v2.T) / 2.0)
    nu1_vals = _clamped(nu1.values)
    nu2_vals = _clamped(nu2.values)

    c_un_1 = _c_un(lam1, n1)
    c_un_2 = _c_un(lam2, n2)
    c_uv_1 = _c_uvn(lam1, nu1_vals, n1)
    c_uv_2 = _c_uvn(lam2, nu2_vals, n2)
    branch_spectral = float(
        lam1[big_n1 - n1] * sd1.delta + c_un_1 + lam2[big_n2 - n2] * sd2.delta + c_un_2
    )
    branch_transport = 2.0 * float(
        nu1_vals[big_n1 - n1] * sd1.delta
        + c_uv_1
        + nu2_vals[big_n2 - n2] * sd2.delta
        + c_uv_2
    )
    lhs = None
    if gw_value_original is not None and gw_value_coarsened is not None:
        lhs = abs(gw_value_coarsened - gw_value_original)
    return PairBoundReport(
        delta_1=sd1.delta,
        delta_2=sd2.delta,
        lam_1=sd1.lam,
        lam_2=sd2.lam,
        nu_1=nu1,
        nu_2=nu2,
        c_un_1=c_un_1,
        c_un_2=c_un_2,
        c_uv_1=c_uv_1,
        c_uv_2=c_uv_2,
        branch_spectral=branch_spectral,
        branch_transport=branch_transport,
        bound_rhs=max(branch_spectral, branch_transport),
        lhs=lhs,
    )


def spectrum_error_top_k(net: MeasureNetwork, ops: CoarseningOperators, k: int) -> float:
    """Mean relative error of the top-k eigenvalues after coarsening."""
    if not 1 <= k <= ops.n_clusters:
        raise InvariantViolation(f"k={k} must lie in [1, {ops.n_clusters}]")
    sd = spectral_difference(net, ops)
    lam = sd.lam.values[:k]
    lam_c = sd.lam_c.values[:k]
    tiny = 1e-12 * max(float(sd.lam.values[0]), 1.0)
    bad = np.flatnonzero(np.abs(lam) <= tiny)
    if bad.size:
        raise ZeroEigenvalue(f"eigenvalue {int(bad[0]) + 1} of the top {k} is zero")
    return float(np.mean((lam - lam_c) / lam))


def solve_with_membership(
    net: MeasureNetwork, ops: CoarseningOperators, cfg: GwConfig
) -> GWResult:
    """Solve GW(net, averaging coarsening) warm-started at the membership plan."""
    coarse = coarsen_similarity(net, ops, Magnitude.AVERAGING)
    plan = membership_transport_plan(ops, net.m)
    warm = GwConfig(
        max_iter=cfg.max_iter,
        tol=cfg.tol,
        restarts=cfg.restarts,
        init=plan,
        seed=cfg.seed,
    )
    return solve_gw(net, coarse, warm)
