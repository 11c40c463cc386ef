"""Robust linear regression: absolute-deviation fit plus an L1 coefficient penalty.

Four interchangeable solvers minimise the same convex piecewise-linear
objective:

- ``lp``: dense tableau simplex on the standard-form recasting;
- ``brute``: exhaustive vertex evaluation, the ground-truth oracle for
  small problems;
- ``locus_ternary`` / ``locus_quadrature``: a two-stage search that walks
  the locus of axis-wise minima with an outer bracket search and inner
  restricted coordinate descent;
- ``ccd_plain``: plain cyclical coordinate descent, which can stall at an
  axis-wise minimum that is not global.

The package also ships a seedable synthetic data generator and a CLI
(``ladlasso``) for solving, cross-checking and benchmarking.
"""

from .brute import enumerate_vertices, solve_brute, solve_linear_system
from .ccd import CcdConfig, ccd_descend, is_axiswise_minimum, perturb_restart, solve_ccd
from .datagen import GenSpec, generate, read_dataset_csv, write_dataset_csv
from .linesearch import (
    Bracket,
    PiecewiseLinear1D,
    SearchConfig,
    SearchResult,
    expand_bracket,
    quadrature_min,
    ternary_min,
    weighted_median_min,
)
from .locus import LocusConfig, LocusPoint, locus_value, sample_locus, solve_locus
from .lp import LpStandardForm, SimplexConfig, dump_lp, formulate, simplex_solve, solve_lp
from .model import (
    Coefficients,
    Dataset,
    ProblemSpec,
    SolveResult,
    axis_restriction,
    evaluate_objective,
    validate_result,
)

__version__ = "0.1.0"

__all__ = [
    "Bracket",
    "CcdConfig",
    "Coefficients",
    "Dataset",
    "GenSpec",
    "LocusConfig",
    "LocusPoint",
    "LpStandardForm",
    "PiecewiseLinear1D",
    "ProblemSpec",
    "SearchConfig",
    "SearchResult",
    "SimplexConfig",
    "SolveResult",
    "axis_restriction",
    "ccd_descend",
    "dump_lp",
    "enumerate_vertices",
    "evaluate_objective",
    "expand_bracket",
    "formulate",
    "generate",
    "is_axiswise_minimum",
    "locus_value",
    "perturb_restart",
    "quadrature_min",
    "read_dataset_csv",
    "sample_locus",
    "simplex_solve",
    "solve_brute",
    "solve_ccd",
    "solve_linear_system",
    "solve_locus",
    "solve_lp",
    "ternary_min",
    "validate_result",
    "weighted_median_min",
    "write_dataset_csv",
]
