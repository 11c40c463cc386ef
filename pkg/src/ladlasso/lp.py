"""Standard-form LP recasting of the objective and a dense tableau simplex.

Splitting each coefficient and each residual into nonnegative positive/
negative parts turns the objective into a linear cost over 2d+2m nonnegative
variables subject to m equality constraints

    x_i . (bp - bn) + rp_i - rn_i = y_i ,

with cost lambda_eff on the coefficient parts and 1 on the residual parts.
Because each back-to-back pair appears with opposite signs in the same
column pair, a basis can hold at most one member of a pair, so at any basic
solution min(bp_j, bn_j) = min(rp_i, rn_i) = 0 without extra constraints.
Splitting the residuals by the sign of y also hands us a feasible starting
basis for free, so no phase-1 is ever needed.

The solver is a plain dense tableau (problem sizes here are tens of columns)
using Dantzig pricing with a permanent switch to Bland's rule after a
degenerate streak, which guarantees termination.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, SimplexError
from .model import Coefficients, ProblemSpec, SolveResult, _beta_array, evaluate_objective

PIVOT_RULES = ("bland", "dantzig_with_bland_fallback")


@dataclass(frozen=True, eq=False)
class LpStandardForm:
    """min cost.v  s.t.  constraint_matrix @ v = rhs,  v >= 0.

    Column blocks, in order: bp (d), bn (d), rp (m), rn (m).  The originating
    problem is kept so solutions can be mapped back and revalidated.
    """

    cost: np.ndarray
    constraint_matrix: np.ndarray
    rhs: np.ndarray
    variable_names: tuple[str, ...]
    spec: ProblemSpec

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def m(self) -> int:
        return self.spec.m


@dataclass(frozen=True)
class SimplexConfig:
    max_pivots: int | None = None  # default 50 * (number of columns)
    pivot_rule: str = "dantzig_with_bland_fallback"
    feasibility_tolerance: float = 1e-9

    def __post_init__(self):
        if self.max_pivots is not None and self.max_pivots < 1:
            raise InvalidInputError("max_pivots must be at least 1")
        if self.pivot_rule not in PIVOT_RULES:
            raise InvalidInputError(f"unknown pivot rule {self.pivot_rule!r}")


@dataclass(eq=False)
class SimplexSolution:
    """Raw simplex output in the full 2d+2m variable space."""

    x: np.ndarray
    objective: float
    pivots: int
    converged: bool
    basis: np.ndarray
    objective_trace: list[float]


def formulate(spec: ProblemSpec) -> LpStandardForm:
    """Build the standard form for a problem."""
    x, y = spec.data.x, spec.data.y
    m, d = spec.m, spec.d
    lam = spec.lambda_eff
    cost = np.concatenate([np.full(2 * d, lam), np.ones(2 * m)])
    matrix = np.hstack([x, -x, np.eye(m), -np.eye(m)])
    names = (
        [f"bp_{j}" for j in range(d)]
        + [f"bn_{j}" for j in range(d)]
        + [f"rp_{i}" for i in range(m)]
        + [f"rn_{i}" for i in range(m)]
    )
    return LpStandardForm(cost, matrix, y.copy(), tuple(names), spec)


def embed(lp: LpStandardForm, beta) -> np.ndarray:
    """Feasible full-space point representing ``beta``; its cost equals the objective."""
    b = _beta_array(lp.spec, beta)
    r = lp.spec.data.y - lp.spec.data.x @ b
    return np.concatenate(
        [np.maximum(b, 0.0), np.maximum(-b, 0.0), np.maximum(r, 0.0), np.maximum(-r, 0.0)]
    )


def initial_basis(lp: LpStandardForm) -> np.ndarray:
    """Sign-split residual basis: rp_i where y_i >= 0, else rn_i.  Always feasible."""
    d, m = lp.d, lp.m
    return np.where(lp.rhs >= 0, 2 * d + np.arange(m), 2 * d + m + np.arange(m))


def simplex_minimize(lp: LpStandardForm, cfg: SimplexConfig | None = None) -> SimplexSolution:
    """Primal simplex from the sign-split basis.

    Raises SimplexError on detected unboundedness, which a well-formed
    formulation cannot produce; treat it as a bug signal.
    """
    cfg = cfg or SimplexConfig()
    a, b, c = lp.constraint_matrix, lp.rhs, lp.cost
    m, n = a.shape
    tol = cfg.feasibility_tolerance
    max_pivots = cfg.max_pivots if cfg.max_pivots is not None else 50 * n

    basis = initial_basis(lp)
    sign = np.where(b >= 0, 1.0, -1.0)
    tableau = np.empty((m + 1, n + 1))
    tableau[:m, :n] = sign[:, None] * a
    tableau[:m, n] = sign * b
    cb = c[basis]
    tableau[m, :n] = c - cb @ tableau[:m, :n]
    tableau[m, n] = -float(cb @ tableau[:m, n])

    bland = cfg.pivot_rule == "bland"
    degenerate_streak = 0
    pivots = 0
    converged = False
    trace = [-float(tableau[m, n])]
    while pivots < max_pivots:
        reduced = tableau[m, :n]
        if bland:
            candidates = np.flatnonzero(reduced < -tol)
            if candidates.size == 0:
                converged = True
                break
            col = int(candidates[0])
        else:
            col = int(np.argmin(reduced))
            if reduced[col] >= -tol:
                converged = True
                break
        pivot_col = tableau[:m, col]
        eligible = pivot_col > tol
        if not eligible.any():
            raise SimplexError("unbounded direction in a formulation that cannot be unbounded")
        ratios = np.full(m, np.inf)
        ratios[eligible] = tableau[:m, n][eligible] / pivot_col[eligible]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12 * (1.0 + abs(best)))
        row = int(ties[np.argmin(basis[ties])])  # Bland-style leaving tie-break

        piv = tableau[row, col]
        tableau[row] /= piv
        col_vals = tableau[:, col].copy()
        col_vals[row] = 0.0
        tableau -= np.outer(col_vals, tableau[row])
        tableau[:, col] = 0.0
        tableau[row, col] = 1.0
        basis[row] = col
        pivots += 1
        trace.append(-float(tableau[m, n]))

        degenerate_streak = degenerate_streak + 1 if best <= tol else 0
        if not bland and degenerate_streak >= n:
            bland = True

    x = np.zeros(n)
    x[basis] = tableau[:m, n]
    return SimplexSolution(x, float(c @ x), pivots, converged, basis.copy(), trace)


def simplex_solve(lp: LpStandardForm, cfg: SimplexConfig | None = None) -> SolveResult:
    """Solve the LP and map back to coefficients, revalidating the objective."""
    t0 = time.perf_counter()
    sol = simplex_minimize(lp, cfg)
    d = lp.d
    beta = sol.x[:d] - sol.x[d : 2 * d]
    objective = evaluate_objective(lp.spec, beta)
    if sol.converged and abs(objective - sol.objective) > 1e-9 * max(1.0, abs(objective)):
        raise SimplexError(
            f"LP optimum {sol.objective!r} does not reproduce the objective {objective!r}"
        )
    return SolveResult(
        beta=Coefficients(beta),
        objective=objective,
        solver_id="lp",
        iterations=sol.pivots,
        objective_evals=1,
        wall_time=time.perf_counter() - t0,
        converged=sol.converged,
    )


def solve_lp(spec: ProblemSpec, cfg: SimplexConfig | None = None) -> SolveResult:
    """Formulate and solve; the reported wall time includes the formulation."""
    t0 = time.perf_counter()
    result = simplex_solve(formulate(spec), cfg)
    return SolveResult(
        beta=result.beta,
        objective=result.objective,
        solver_id="lp",
        iterations=result.iterations,
        objective_evals=result.objective_evals,
        wall_time=time.perf_counter() - t0,
        converged=result.converged,
    )


def dump_lp(lp: LpStandardForm, path) -> None:
    """Write the standard form as fixed-column text for external cross-checks.

    Layout:
      line 1: 'LADLASSO-LP 1'                  format tag and version
      line 2: 'vars <n> rows <m>'
      line 3: variable names, space separated
      line 4: 'minimize'
      line 5: the n cost coefficients
      line 6: 'subject-to'
      next m lines: n row coefficients, '=', right-hand side
      last line: 'bounds all >= 0'
    Every number occupies a 25-character column formatted %+.17e.
    """
    num = "{:+25.17e}"

    def row(values) -> str:
        return " ".join(num.format(v) for v in values)

    m = lp.constraint_matrix.shape[0]
    lines = [
        "LADLASSO-LP 1",
        f"vars {lp.cost.size} rows {m}",
        " ".join(lp.variable_names),
        "minimize",
        row(lp.cost),
        "subject-to",
    ]
    for i in range(m):
        lines.append(row(lp.constraint_matrix[i]) + " = " + num.format(lp.rhs[i]))
    lines.append("bounds all >= 0")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
