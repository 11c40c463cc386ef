"""One-dimensional minimisers for convex piecewise-linear functions.

A function of the form

    g(t) = constant + sum_k weight_k * |t - location_k|

is convex and attains its minimum at a weighted median of the breakpoint
locations; ``weighted_median_min`` computes that exactly.  When only an
evaluator is available two bracket searches are provided: ``ternary_min``
(two interior probes, bracket shrinks by one third per round) and
``quadrature_min`` (a fixed interior grid of probes per round, so the work
per round is constant and data independent - the control-flow shape that
maps onto wide SIMD hardware without reductions).  ``expand_bracket`` grows
a bracket until it provably contains a minimum of a convex evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateInputError, InvalidInputError, UnboundedDirectionError

Evaluator = Callable[[float], float]


@dataclass(frozen=True, eq=False)
class PiecewiseLinear1D:
    """g(t) = constant + sum_k weights[k] * |t - locations[k]|."""

    locations: np.ndarray
    weights: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        locs = np.atleast_1d(np.array(self.locations, dtype=float))
        w = np.atleast_1d(np.array(self.weights, dtype=float))
        if locs.ndim != 1 or locs.shape != w.shape:
            raise InvalidInputError("locations and weights must be 1-D and the same length")
        if not (np.isfinite(locs).all() and np.isfinite(w).all()):
            raise InvalidInputError("breakpoints must be finite")
        if (w < 0).any():
            raise InvalidInputError("breakpoint weights must be nonnegative")
        if not np.isfinite(self.constant) or self.constant < 0:
            raise InvalidInputError("constant must be finite and nonnegative")
        locs.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "constant", float(self.constant))

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def __call__(self, t: float) -> float:
        return self.constant + float(np.abs(t - self.locations) @ self.weights)

    def values(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return self.constant + np.abs(ts[:, None] - self.locations[None, :]) @ self.weights

    def slopes_at(self, t: float, atol: float = 0.0) -> tuple[float, float]:
        """One-sided derivatives (left, right) at t.

        Breakpoints within ``atol`` of t are treated as sitting exactly at t,
        which is what makes the test usable on coordinates produced by
        floating-point descent steps.
        """
        below = self.locations < t - atol
        above = self.locations > t + atol
        w_below = float(self.weights[below].sum())
        w_above = float(self.weights[above].sum())
        w_at = self.total_weight - w_below - w_above
        return w_below - w_at - w_above, w_below + w_at - w_above


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise InvalidInputError("bracket endpoints must be finite")
        if not self.lo < self.hi:
            raise InvalidInputError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class SearchConfig:
    """Bracket-search termination knobs.

    ``tolerance`` is the final bracket width as a fraction of the *initial*
    width, so the stopping rule is scale free.  ``probes`` only matters for
    the quadrature search and must be at least 3 so each round strictly
    shrinks the bracket.
    """

    tolerance: float = 1e-8
    max_iterations: int = 200
    probes: int = 8

    def __post_init__(self):
        if self.tolerance <= 0:
            raise InvalidInputError("tolerance must be positive")
        if self.max_iterations < 1:
            raise InvalidInputError("max_iterations must be at least 1")
        if self.probes < 3:
            raise InvalidInputError("probes must be at least 3")


@dataclass(frozen=True)
class SearchResult:
    t: float
    value: float
    rounds: int
    evals: int
    converged: bool
    bracket: Bracket


def weighted_median_min(g: PiecewiseLinear1D) -> tuple[float, float]:
    """Exact minimiser of a convex piecewise-linear function.

    Returns the first breakpoint (in location order) where the cumulative
    weight reaches half the total; if it hits one half exactly the minimum is
    flat between two breakpoints and the midpoint of that segment is returned.
    """
    if g.locations.size == 0:
        raise DegenerateInputError("need at least one breakpoint")
    total = g.total_weight
    if total <= 0.0:
        raise DegenerateInputError("total breakpoint weight must be positive")
    order = np.argsort(g.locations, kind="stable")
    locs = g.locations[order]
    cum = np.cumsum(g.weights[order])
    half = 0.5 * total
    k = int(np.searchsorted(cum, half))
    if k + 1 < locs.size and abs(cum[k] - half) <= 1e-12 * total:
        t_star = 0.5 * (locs[k] + locs[k + 1])
    else:
        t_star = float(locs[min(k, locs.size - 1)])
    return t_star, g(t_star)


class _Best:
    """Running best (t, value) over evaluated points; ties keep the earliest."""

    __slots__ = ("t", "value")

    def __init__(self):
        self.t = np.nan
        self.value = np.inf

    def offer(self, t: float, value: float) -> None:
        if value < self.value:
            self.t = t
            self.value = value


def ternary_min(g: Evaluator, bracket: Bracket, cfg: SearchConfig | None = None) -> SearchResult:
    """Two-interior-probe bracket search for a convex evaluator.

    Returns the best point evaluated (the final bracket midpoint unless an
    earlier probe was strictly better), so the result is never worse than the
    value at the input bracket midpoint.
    """
    cfg = cfg or SearchConfig()
    lo, hi = bracket.lo, bracket.hi
    target = cfg.tolerance * (hi - lo)
    best = _Best()
    best.offer(bracket.mid, g(bracket.mid))
    evals = 1
    rounds = 0
    while (hi - lo) > target and rounds < cfg.max_iterations:
        third = (hi - lo) / 3.0
        m1 = lo + third
        m2 = hi - third
        v1 = g(m1)
        v2 = g(m2)
        evals += 2
        best.offer(m1, v1)
        best.offer(m2, v2)
        if v1 < v2:
            hi = m2
        else:
            lo = m1
        rounds += 1
    mid = 0.5 * (lo + hi)
    best.offer(mid, g(mid))
    evals += 1
    return SearchResult(best.t, best.value, rounds, evals, (hi - lo) <= target, Bracket(lo, hi))


def quadrature_min(g: Evaluator, bracket: Bracket, cfg: SearchConfig | None = None) -> SearchResult:
    """Fixed-grid bracket search: ``probes`` equally spaced interior points per
    round, then shrink to the two grid intervals adjacent to the best probe.

    Every round does identical work regardless of the data, and the bracket
    width shrinks by the factor 2/(probes+1) per round.
    """
    cfg = cfg or SearchConfig()
    lo, hi = bracket.lo, bracket.hi
    target = cfg.tolerance * (hi - lo)
    best = _Best()
    best.offer(bracket.mid, g(bracket.mid))
    evals = 1
    rounds = 0
    while (hi - lo) > target and rounds < cfg.max_iterations:
        h = (hi - lo) / (cfg.probes + 1)
        ts = lo + h * np.arange(1, cfg.probes + 1)
        vs = [g(float(t)) for t in ts]
        evals += cfg.probes
        i = int(np.argmin(vs))
        best.offer(float(ts[i]), vs[i])
        lo = max(lo, float(ts[i]) - h)
        hi = min(hi, float(ts[i]) + h)
        rounds += 1
    mid = 0.5 * (lo + hi)
    best.offer(mid, g(mid))
    evals += 1
    return SearchResult(best.t, best.value, rounds, evals, (hi - lo) <= target, Bracket(lo, hi))


def expand_bracket(g: Evaluator, bracket: Bracket, growth: float = 2.0, max_doublings: int = 60) -> Bracket:
    """Grow a bracket until its interior holds a point strictly below both ends.

    For a convex evaluator that certificate implies a minimum lies inside.
    The bracket is extended on whichever side has the lower endpoint value
    (both sides on an exact tie); `UnboundedDirectionError` after
    ``max_doublings`` extensions means the function keeps descending, which a
    penalised objective cannot do.
    """
    if growth <= 1.0:
        raise InvalidInputError("growth must exceed 1")
    lo, hi = bracket.lo, bracket.hi
    g_lo = g(lo)
    g_hi = g(hi)
    for _ in range(max_doublings):
        g_mid = g(0.5 * (lo + hi))
        if g_mid < g_lo and g_mid < g_hi:
            return Bracket(lo, hi)
        step = (growth - 1.0) * (hi - lo)
        if g_lo < g_hi:
            lo -= step
            g_lo = g(lo)
        elif g_hi < g_lo:
            hi += step
            g_hi = g(hi)
        else:
            lo -= step
            hi += step
            g_lo = g(lo)
            g_hi = g(hi)
    raise UnboundedDirectionError(
        f"no interior minimum found after {max_doublings} bracket extensions"
    )
