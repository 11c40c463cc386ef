"""Cyclical coordinate descent on the piecewise-linear objective.

Each coordinate update minimises the exact one-dimensional restriction of the
objective (a weighted sum of absolute deviations), either with the exact
weighted-median oracle or with a bracket search.  A candidate move is applied
only when it strictly lowers the tracked objective, so the value sequence is
non-increasing by construction.

On a non-smooth surface the sweep can halt at a point where every
axis-parallel direction increases even though a diagonal descent direction
still exists; ``is_axiswise_minimum`` certifies exactly that halting
condition from one-sided slopes.  The optional ``frozen_axis`` pins one
coordinate so the descent explores only the orthogonal subspace, which is
what the outer locus search needs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .linesearch import (
    Bracket,
    PiecewiseLinear1D,
    SearchConfig,
    quadrature_min,
    ternary_min,
    weighted_median_min,
)
from .model import (
    Coefficients,
    ProblemSpec,
    SolveResult,
    _beta_array,
    axis_restriction,
    objective_value,
)

LINE_SEARCHES = ("exact_median", "ternary", "quadrature")


@dataclass(frozen=True)
class CcdConfig:
    """Descent controls.

    ``sweep_tolerance`` is the minimum objective decrease a full sweep must
    achieve for the descent to continue; ``frozen_axis`` (if set) is never
    updated.  ``search`` only matters for the ternary/quadrature line
    searches.
    """

    line_search: str = "exact_median"
    sweep_tolerance: float = 1e-10
    max_sweeps: int = 500
    frozen_axis: int | None = None
    search: SearchConfig = field(default_factory=SearchConfig)

    def __post_init__(self):
        if self.line_search not in LINE_SEARCHES:
            raise InvalidInputError(f"unknown line search {self.line_search!r}")
        if self.sweep_tolerance <= 0:
            raise InvalidInputError("sweep_tolerance must be positive")
        if self.max_sweeps < 1:
            raise InvalidInputError("max_sweeps must be at least 1")


def _axis_pwl(x, y_minus_xb, b, lam, j):
    """Axis restriction built from the maintained residual vector."""
    col = x[:, j]
    base = y_minus_xb + col * b[j]
    nz = col != 0.0
    locations = np.append(base[nz] / col[nz], 0.0)
    weights = np.append(np.abs(col[nz]), lam)
    constant = float(np.abs(base[~nz]).sum() + lam * (np.abs(b).sum() - abs(b[j])))
    return PiecewiseLinear1D(locations, weights, constant)


def _median_location(locations: np.ndarray, weights: np.ndarray) -> float:
    """Weighted-median minimiser on raw arrays; same tie rule as the oracle."""
    order = np.argsort(locations, kind="stable")
    slocs = locations[order]
    cum = np.cumsum(weights[order])
    total = cum[-1]
    half = 0.5 * total
    k = int(np.searchsorted(cum, half))
    if k + 1 < slocs.size and abs(cum[k] - half) <= 1e-12 * total:
        return 0.5 * (slocs[k] + slocs[k + 1])
    return float(slocs[min(k, slocs.size - 1)])


class _AxisWorkspace:
    """Per-axis constant structure reused across sweeps of one descent."""

    __slots__ = ("col", "dense", "nz_idx", "col_nz", "zero_idx", "locations", "weights")

    def __init__(self, col: np.ndarray, lam: float):
        self.col = np.ascontiguousarray(col)
        self.nz_idx = np.flatnonzero(col != 0.0)
        self.dense = self.nz_idx.size == col.size
        self.col_nz = self.col if self.dense else col[self.nz_idx]
        self.zero_idx = np.flatnonzero(col == 0.0)
        k = self.nz_idx.size
        self.locations = np.empty(k + 1)
        self.locations[k] = 0.0
        self.weights = np.empty(k + 1)
        self.weights[:k] = np.abs(self.col_nz)
        self.weights[k] = lam


def _line_minimum(g: PiecewiseLinear1D, cfg: CcdConfig) -> tuple[float, float, int]:
    if cfg.line_search == "exact_median":
        t, v = weighted_median_min(g)
        return t, v, 1
    lo = float(g.locations.min())
    hi = float(g.locations.max())
    if lo == hi:
        return lo, g(lo), 1
    search = ternary_min if cfg.line_search == "ternary" else quadrature_min
    res = search(g, Bracket(lo, hi), cfg.search)
    return res.t, res.value, res.evals


def ccd_descend(
    spec: ProblemSpec,
    start: Coefficients,
    cfg: CcdConfig | None = None,
    trace: list | None = None,
) -> SolveResult:
    """Run cyclical coordinate descent from ``start``.

    Axes are visited in fixed ascending order.  ``converged`` is True iff some
    full sweep improved the objective by less than ``sweep_tolerance``;
    otherwise the sweep budget ran out and the best point so far is returned.
    ``iterations`` counts sweeps, ``objective_evals`` counts 1-D minimisations
    (or probe evaluations for bracket line searches).  If ``trace`` is a list,
    the objective after every coordinate update (moved or not) is appended.
    """
    cfg = cfg or CcdConfig()
    t0 = time.perf_counter()
    b = _beta_array(spec, start).copy()
    if cfg.frozen_axis is not None and not 0 <= cfg.frozen_axis < spec.d:
        raise InvalidInputError(f"frozen_axis {cfg.frozen_axis} out of range for d={spec.d}")
    x, y = spec.data.x, spec.data.y
    lam = spec.lambda_eff
    residual = y - x @ b
    f_cur = float(np.abs(residual).sum() + lam * np.abs(b).sum())
    exact = cfg.line_search == "exact_median"
    axes = [j for j in range(spec.d) if j != cfg.frozen_axis]
    work = [_AxisWorkspace(x[:, j], lam) if exact else None for j in range(spec.d)]
    evals = 0
    sweeps = 0
    converged = False
    for _ in range(cfg.max_sweeps):
        sweeps += 1
        f_sweep_start = f_cur
        sum_abs_b = float(np.abs(b).sum())  # refresh: incremental updates may drift
        for j in axes:
            if exact:
                ws = work[j]
                k = ws.nz_idx.size
                if ws.dense:
                    np.divide(residual, ws.col_nz, out=ws.locations[:k])
                    ws.locations[:k] += b[j]
                else:
                    base = residual[ws.nz_idx] + ws.col_nz * b[j]
                    ws.locations[:k] = base / ws.col_nz
                t_new = _median_location(ws.locations, ws.weights)
                evals += 1
                if abs(t_new - b[j]) <= 1e-14 * (1.0 + abs(b[j])):
                    # already at this axis' minimiser (up to residual rounding)
                    if trace is not None:
                        trace.append(f_cur)
                    continue
                constant = lam * (sum_abs_b - abs(b[j]))
                if ws.zero_idx.size:
                    constant += float(np.abs(residual[ws.zero_idx]).sum())
                v_new = constant + float(np.abs(t_new - ws.locations) @ ws.weights)
                col = ws.col
            else:
                g = _axis_pwl(x, residual, b, lam, j)
                t_new, v_new, n = _line_minimum(g, cfg)
                evals += n
                col = x[:, j]
            if v_new < f_cur:
                residual -= col * (t_new - b[j])
                sum_abs_b += abs(t_new) - abs(b[j])
                b[j] = t_new
                f_cur = v_new
            if trace is not None:
                trace.append(f_cur)
        if f_sweep_start - f_cur < cfg.sweep_tolerance:
            converged = True
            break
    objective = objective_value(x, y, lam, b)
    return SolveResult(
        beta=Coefficients(b),
        objective=objective,
        solver_id="ccd_plain",
        iterations=sweeps,
        objective_evals=evals,
        wall_time=time.perf_counter() - t0,
        converged=converged,
    )


def solve_ccd(spec: ProblemSpec, cfg: CcdConfig | None = None, start: Coefficients | None = None) -> SolveResult:
    """Plain descent from zero (or ``start``); may stall above the optimum."""
    return ccd_descend(spec, start or Coefficients.zeros(spec.d), cfg)


def is_axiswise_minimum(
    spec: ProblemSpec,
    beta,
    skip: int | None = None,
    tol: float = 1e-9,
) -> bool:
    """True iff no axis-parallel move (except along ``skip``) descends.

    The one-sided slopes of each axis restriction are computed exactly from
    the breakpoint weights; ``tol`` (relative to the coordinate magnitude)
    decides which breakpoints count as sitting at the current coordinate,
    absorbing the rounding noise of incrementally maintained residuals.
    """
    b = _beta_array(spec, beta)
    for j in range(spec.d):
        if j == skip:
            continue
        g = axis_restriction(spec, beta, j)
        atol = tol * max(1.0, abs(b[j]))
        left, right = g.slopes_at(b[j], atol)
        slope_eps = 1e-12 * (g.total_weight + 1.0)
        if left > slope_eps or right < -slope_eps:
            return False
    return True


def perturb_restart(
    spec: ProblemSpec,
    beta: Coefficients,
    axis: int,
    delta: float,
    cfg: CcdConfig | None = None,
) -> SolveResult:
    """Diagnostic: nudge one coordinate of a halted point and descend again.

    Useful for probing neighbouring axis-wise minima; the production path
    uses the frozen-axis restricted descent instead.
    """
    b = _beta_array(spec, beta).copy()
    if not 0 <= axis < spec.d:
        raise InvalidInputError(f"axis {axis} out of range for d={spec.d}")
    b[axis] += delta
    return ccd_descend(spec, Coefficients(b), cfg)
