"""Constrained multiplicity maximisation via Lagrange multipliers.

The most probable occupancy under the firm-count and total-revenue
constraints has the closed form

    a_k = g_k / (exp(alpha + beta * e_k) - I),   I in {0, 1},

where I = 0 gives the Boltzmann (monopolistic competition) solution and
I = 1 the Bose-Einstein (perfect competition) solution.  This module solves
for (alpha, beta) by damped Newton iteration with an analytic Jacobian,
falling back to nested bisection: the firm count is strictly decreasing in
alpha at fixed beta, and the constrained mean revenue is strictly decreasing
in beta, so both root problems bracket cleanly.  The bisection path doubles
as an independent high-precision oracle for the Newton path.

Near perfect competition the Bose-Einstein denominator can approach zero at
the lowest level; detect_condensation flags that crisis regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import EconomicOrder, EconomyConfig, Regime, RevenueGrid
from .counting import stirling_log_multiplicity
from .errors import ConfigError, InfeasibleError, SingularityError


@dataclass(frozen=True)
class MultiplierSolution:
    """Solved multipliers with the real-valued occupancy and residuals.

    alpha and beta are None for boundary-degenerate economies (mean revenue
    exactly at the lowest or highest level), where the occupancy is forced
    and no finite multipliers exist.
    """

    alpha: float | None
    beta: float | None
    occupancy: tuple[float, ...]
    residual_n: float
    residual_pi: float
    iterations: int
    converged: bool
    boundary: bool = False
    pinned: bool = False
    method: str = "newton"


@dataclass(frozen=True)
class CondensationReport:
    condensed: bool
    ground_fraction: float
    gap: float
    fraction_threshold: float
    gap_threshold: float


def occupancy(
    alpha: float, beta: float, grid: RevenueGrid, regime: Regime
) -> np.ndarray:
    """Closed-form occupancy a_k = g_k / (exp(alpha + beta e_k) - I)."""
    e = np.asarray(grid.levels, dtype=float)
    g = np.asarray(grid.degeneracies, dtype=float)
    x = alpha + beta * e
    if regime is Regime.PERFECT:
        k = int(np.argmin(x))
        if x[k] <= 0.0:
            raise SingularityError(
                "Bose-Einstein occupancy undefined at level %d (revenue %s): "
                "alpha + beta*e = %g <= 0" % (k, grid.levels[k], x[k]),
                level_index=k,
            )
        return g / np.expm1(x)
    with np.errstate(over="ignore"):
        return g * np.exp(-x)


def _occ_scaled(indicator: int, g: Sequence[float], e: Sequence[float], alpha: float, beta: float) -> list[float]:
    # python-scalar evaluation; used by the bisection paths where n is small
    if indicator:
        return [gi / math.expm1(alpha + beta * ei) for gi, ei in zip(g, e)]
    return [gi * math.exp(-alpha - beta * ei) for gi, ei in zip(g, e)]


def _alpha_for_beta(
    indicator: int,
    g: Sequence[float],
    e: Sequence[float],
    n_firms: float,
    beta: float,
    inner_iters: int = 110,
) -> float:
    """Solve sum_k a_k(alpha, beta) = N for alpha at fixed beta."""
    if indicator == 0:
        # closed form via a stable log-sum-exp
        shift = max(-beta * ei for ei in e)
        acc = sum(gi * math.exp(-beta * ei - shift) for gi, ei in zip(g, e))
        return shift + math.log(acc) - math.log(n_firms)
    wall = max(-beta * ei for ei in e)

    def excess(offset: float) -> float:
        alpha = wall + offset
        return sum(gi / math.expm1(alpha + beta * ei) for gi, ei in zip(g, e)) - n_firms

    lo = 1.0
    while excess(lo) < 0.0:
        lo /= 16.0
        if lo < 1e-300:
            break
    hi = max(2.0 * lo, 1.0)
    while excess(hi) > 0.0:
        hi *= 4.0
        if hi > 1e300:
            break
    for _ in range(inner_iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return wall + 0.5 * (lo + hi)


def solve_multipliers_bisection(
    grid: RevenueGrid,
    config: EconomyConfig,
    tol: float = 1e-14,
    max_iters: int = 200,
) -> MultiplierSolution:
    """Nested-bisection solve: outer on beta (mean revenue is decreasing in
    beta at fixed firm count), inner on alpha (firm count is decreasing in
    alpha at fixed beta).  Slow but bracketing-safe; serves as the oracle
    for the Newton path.
    """
    prepared = _prepare(grid, config)
    if isinstance(prepared, MultiplierSolution):
        return prepared
    indicator, g, e, n_firms, pi_scaled, scale = prepared

    def mean_excess(beta: float) -> float:
        alpha = _alpha_for_beta(indicator, g, e, n_firms, beta)
        occ = _occ_scaled(indicator, g, e, alpha, beta)
        return sum(a * ei for a, ei in zip(occ, e)) - pi_scaled

    h0 = mean_excess(0.0)
    iters = 1
    if h0 > 0.0:
        lo, hi = 0.0, 1.0
        while mean_excess(hi) > 0.0 and hi < 1e18:
            hi *= 2.0
            iters += 1
    elif h0 < 0.0:
        lo, hi = -1.0, 0.0
        while mean_excess(lo) < 0.0 and lo > -1e18:
            lo *= 2.0
            iters += 1
    else:
        lo = hi = 0.0
    for _ in range(max_iters):
        if hi - lo <= tol * max(1.0, abs(lo), abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        iters += 1
        if mean_excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    beta_s = 0.5 * (lo + hi)
    alpha = _alpha_for_beta(indicator, g, e, n_firms, beta_s)
    occ = _occ_scaled(indicator, g, e, alpha, beta_s)
    res_n = sum(occ) - n_firms
    res_pi = (sum(a * ei for a, ei in zip(occ, e)) - pi_scaled) * scale
    converged = abs(res_n) <= 1e-10 * n_firms and abs(res_pi) <= 1e-10 * max(
        1.0, pi_scaled * scale
    )
    return MultiplierSolution(
        alpha=alpha,
        beta=beta_s / scale,
        occupancy=tuple(occ),
        residual_n=res_n,
        residual_pi=res_pi,
        iterations=iters,
        converged=converged,
        method="bisection",
    )


def _prepare(grid: RevenueGrid, config: EconomyConfig):
    """Shared feasibility handling; returns either a degenerate solution or
    the scaled problem data (indicator, g, e, N, Pi_scaled, scale)."""
    if config.total_revenue is None:
        raise ConfigError("economy.Pi: total revenue is required to solve for multipliers")
    n_firms = float(config.n_firms)
    pi = float(config.total_revenue)
    lo_total = config.n_firms * grid.levels[0]
    hi_total = config.n_firms * grid.levels[-1]
    if not (lo_total <= config.total_revenue <= hi_total):
        raise InfeasibleError(
            "infeasible economy: total revenue %d outside [%d, %d]"
            % (config.total_revenue, lo_total, hi_total)
        )
    if config.total_revenue == lo_total or config.total_revenue == hi_total:
        occ = [0.0] * grid.n
        occ[0 if config.total_revenue == lo_total else -1] = n_firms
        return MultiplierSolution(
            alpha=None,
            beta=None,
            occupancy=tuple(occ),
            residual_n=0.0,
            residual_pi=0.0,
            iterations=0,
            converged=True,
            boundary=True,
            method="degenerate",
        )
    scale = float(grid.levels[-1]) if grid.levels[-1] > 0 else 1.0
    e = [ei / scale for ei in grid.levels]
    g = [float(gi) for gi in grid.degeneracies]
    return int(config.regime), g, e, n_firms, pi / scale, scale


def solve_multipliers(
    grid: RevenueGrid,
    config: EconomyConfig,
    tol: float = 1e-10,
    max_iterations: int = 80,
    method: str = "newton",
) -> MultiplierSolution:
    """Solve the two-constraint system for (alpha, beta).

    Damped Newton with the analytic Jacobian; steps that leave the
    Bose-Einstein domain (alpha + beta*e_k <= 0) or fail to shrink the
    residual are halved.  If Newton stalls, the nested-bisection fallback
    finishes the job.  Residual tolerances are relative to N and Pi.
    """
    if method == "bisection":
        return solve_multipliers_bisection(grid, config)
    if method != "newton":
        raise ConfigError("solver method must be 'newton' or 'bisection'")
    prepared = _prepare(grid, config)
    if isinstance(prepared, MultiplierSolution):
        return prepared
    indicator, g_list, e_list, n_firms, pi_scaled, scale = prepared
    g = np.array(g_list)
    e = np.array(e_list)
    denom_pi = max(abs(pi_scaled), 1e-12 * n_firms)

    span = float(e[-1] - e[0])
    if indicator == 0:
        alpha, beta = math.log(float(g.sum()) / n_firms), 0.0
    else:
        alpha, beta = 0.1 * span, 0.0

    def occ_and_residual(a: float, b: float):
        x = a + b * e
        if indicator:
            if float(x.min()) <= 0.0:
                return None, None
            occ = g / np.expm1(x)
        else:
            with np.errstate(over="ignore"):
                occ = g * np.exp(-x)
        if not np.all(np.isfinite(occ)):
            return None, None
        f1 = float(occ.sum()) - n_firms
        f2 = float((occ * e).sum()) - pi_scaled
        return occ, (f1, f2)

    occ, resid = occ_and_residual(alpha, beta)
    pinned = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        if occ is None:
            break
        f1, f2 = resid
        if abs(f1) <= tol * n_firms and abs(f2) <= tol * denom_pi:
            return MultiplierSolution(
                alpha=alpha,
                beta=beta / scale,
                occupancy=tuple(float(a) for a in occ),
                residual_n=f1,
                residual_pi=f2 * scale,
                iterations=iterations - 1,
                converged=True,
                pinned=pinned,
                method="newton",
            )
        if indicator:
            dda = -occ * (occ + g) / g
        else:
            dda = -occ
        ddb = dda * e
        j11, j12 = float(dda.sum()), float(ddb.sum())
        j21, j22 = float((dda * e).sum()), float((ddb * e).sum())
        det = j11 * j22 - j12 * j21
        if det == 0.0 or not math.isfinite(det):
            break
        step_a = -(j22 * f1 - j12 * f2) / det
        step_b = -(-j21 * f1 + j11 * f2) / det
        norm0 = math.hypot(f1 / n_firms, f2 / denom_pi)
        lam = 1.0
        moved = False
        while lam >= 1e-12:
            cand_a, cand_b = alpha + lam * step_a, beta + lam * step_b
            occ_new, resid_new = occ_and_residual(cand_a, cand_b)
            if occ_new is not None:
                f1n, f2n = resid_new
                if math.hypot(f1n / n_firms, f2n / denom_pi) < norm0:
                    alpha, beta = cand_a, cand_b
                    occ, resid = occ_new, resid_new
                    moved = True
                    break
            lam *= 0.5
        if not moved:
            pinned = indicator == 1 and lam < 1e-12
            break

    # Newton stalled or ran out of iterations: finish with bisection
    fallback = solve_multipliers_bisection(grid, config)
    if fallback.converged:
        return fallback
    return MultiplierSolution(
        alpha=fallback.alpha,
        beta=fallback.beta,
        occupancy=fallback.occupancy,
        residual_n=fallback.residual_n,
        residual_pi=fallback.residual_pi,
        iterations=iterations + fallback.iterations,
        converged=False,
        pinned=pinned,
        method="bisection",
    )


def detect_condensation(
    solution: MultiplierSolution,
    grid: RevenueGrid,
    config: EconomyConfig,
    fraction_threshold: float = 0.5,
    gap_threshold: float = 1e-6,
) -> CondensationReport:
    """Flag Bose-Einstein condensation: ground-level pile-up or vanishing gap.

    Monopolistic economies have no singularity and are never condensed.
    """
    ground_fraction = solution.occupancy[0] / config.n_firms
    if solution.alpha is None or solution.beta is None:
        gap = math.nan
    else:
        gap = solution.alpha + solution.beta * grid.levels[0]
    if config.regime is Regime.MONOPOLISTIC:
        condensed = False
    else:
        condensed = ground_fraction >= fraction_threshold or (
            math.isfinite(gap) and gap <= gap_threshold
        )
    return CondensationReport(
        condensed=condensed,
        ground_fraction=ground_fraction,
        gap=gap,
        fraction_threshold=fraction_threshold,
        gap_threshold=gap_threshold,
    )


def entropy_of(
    order: EconomicOrder | Sequence[float], grid: RevenueGrid, regime: Regime
) -> float:
    """Stirling log-multiplicity of an occupancy; accepts real values."""
    return stirling_log_multiplicity(order, grid, regime)
