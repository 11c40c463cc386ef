"""Shared helpers for the test suite."""

import numpy as np

from ladlasso.datagen import GenSpec, generate
from ladlasso.model import Dataset, ProblemSpec


def make_problem(seed, d, m, lam, noise=1.0, outliers=0.2):
    """Seeded random problem in the style of the agreement sweeps."""
    data, _ = generate(
        GenSpec(m=m, d=d, noise_sigma=noise, outlier_fraction=outliers, seed=seed)
    )
    return ProblemSpec(data, lam)


def tiny_problem(x, y, lam, **kw):
    return ProblemSpec(Dataset(np.atleast_2d(x), np.atleast_1d(y)), lam, **kw)


def rel_gap(value, reference):
    return abs(value - reference) / max(abs(reference), 1e-30)
