import numpy as np
import pytest

from ladlasso.brute import solve_brute
from ladlasso.errors import InvalidInputError
from ladlasso.lp import (
    SimplexConfig,
    dump_lp,
    embed,
    formulate,
    initial_basis,
    simplex_minimize,
    simplex_solve,
    solve_lp,
)
from ladlasso.model import evaluate_objective
from util import make_problem, rel_gap, tiny_problem


def test_formulate_single_point():
    spec = tiny_problem([[1.0]], [2.0], 0.5)
    lp = formulate(spec)
    assert list(lp.cost) == [0.5, 0.5, 1.0, 1.0]
    assert lp.constraint_matrix.tolist() == [[1.0, -1.0, 1.0, -1.0]]
    assert list(lp.rhs) == [2.0]
    assert lp.variable_names == ("bp_0", "bn_0", "rp_0", "rn_0")


def test_embedding_is_feasible_with_matching_cost():
    spec = make_problem(seed=7, d=3, m=6, lam=0.2)
    lp = formulate(spec)
    rng = np.random.default_rng(0)
    for _ in range(20):
        beta = rng.uniform(-5, 5, spec.d)
        v = embed(lp, beta)
        assert (v >= 0).all()
        assert np.allclose(lp.constraint_matrix @ v, lp.rhs, atol=1e-12)
        assert lp.cost @ v == pytest.approx(evaluate_objective(spec, beta), rel=1e-12)


def test_zero_embedding_is_the_starting_basis():
    spec = make_problem(seed=8, d=2, m=5, lam=0.1)
    lp = formulate(spec)
    v = embed(lp, np.zeros(spec.d))
    basis = initial_basis(lp)
    nonzero = np.flatnonzero(v > 0)
    assert set(nonzero) <= set(basis)
    # basic values are |y|, split by sign
    assert v[basis].tolist() == pytest.approx(np.abs(lp.rhs).tolist())


def test_near_zero_penalty_fits_exactly():
    spec = tiny_problem([[1.0]], [2.0], 0.0001)
    res = solve_lp(spec)
    assert res.converged
    assert res.beta.beta[0] == pytest.approx(2.0, abs=1e-9)
    assert res.objective == pytest.approx(0.0002, rel=1e-9)


def test_heavy_penalty_shrinks_to_zero():
    spec = make_problem(seed=10, d=2, m=6, lam=0.1)
    lam_big = float(np.abs(spec.data.x).sum(axis=0).max()) * 1.01
    big = make_problem(seed=10, d=2, m=6, lam=lam_big)
    res = solve_lp(big)
    assert np.allclose(res.beta.beta, 0.0, atol=1e-12)
    assert res.objective == pytest.approx(np.abs(big.data.y).sum(), rel=1e-12)


def test_matches_brute_force_on_200_instances():
    worst = 0.0
    for i in range(200):
        d = 1 + i % 3
        m = 4 + i % 7
        lam = (0.01, 0.1, 1.0)[i % 3]
        spec = make_problem(seed=2000 + i, d=d, m=m, lam=lam)
        reference = solve_brute(spec)
        res = solve_lp(spec)
        assert res.converged
        worst = max(worst, rel_gap(res.objective, reference.objective))
    assert worst < 1e-7


def test_complementarity_of_paired_variables():
    for seed in range(30):
        spec = make_problem(seed=seed, d=2, m=6, lam=0.1)
        lp = formulate(spec)
        sol = simplex_minimize(lp)
        assert sol.converged
        d, m = spec.d, spec.m
        bp, bn = sol.x[:d], sol.x[d : 2 * d]
        rp, rn = sol.x[2 * d : 2 * d + m], sol.x[2 * d + m :]
        assert np.minimum(bp, bn).max() <= 1e-9
        assert np.minimum(rp, rn).max() <= 1e-9


def test_objective_trace_never_increases():
    spec = make_problem(seed=33, d=3, m=10, lam=0.1)
    sol = simplex_minimize(formulate(spec))
    trace = np.array(sol.objective_trace)
    assert (np.diff(trace) <= 1e-9).all()


def test_bland_rule_reaches_same_objective():
    spec = make_problem(seed=34, d=3, m=8, lam=0.1)
    lp = formulate(spec)
    default = simplex_minimize(lp)
    bland = simplex_minimize(lp, SimplexConfig(pivot_rule="bland"))
    assert bland.objective == pytest.approx(default.objective, rel=1e-10)


def test_pivot_budget_flags_non_convergence():
    spec = make_problem(seed=35, d=3, m=10, lam=0.1)
    res = simplex_solve(formulate(spec), SimplexConfig(max_pivots=1))
    assert not res.converged


def test_config_validation():
    with pytest.raises(InvalidInputError):
        SimplexConfig(max_pivots=0)
    with pytest.raises(InvalidInputError):
        SimplexConfig(pivot_rule="steepest")


def test_unbounded_direction_is_an_internal_error():
    # a hand-corrupted cost row makes a coefficient column profitable forever;
    # a well-formed formulation can never do this
    from ladlasso.errors import SimplexError
    from ladlasso.lp import LpStandardForm

    spec = tiny_problem([[1.0]], [2.0], 0.5)
    lp = formulate(spec)
    cost = lp.cost.copy()
    cost[:2] = -1.0
    broken = LpStandardForm(cost, lp.constraint_matrix, lp.rhs, lp.variable_names, spec)
    with pytest.raises(SimplexError):
        simplex_minimize(broken)


def test_dump_cross_checks_with_external_solver(tmp_path):
    # the dump exists so a third-party LP solver can reproduce the optimum
    linprog = pytest.importorskip("scipy.optimize").linprog
    spec = make_problem(seed=21, d=2, m=6, lam=0.1)
    lp = formulate(spec)
    path = tmp_path / "form.lp"
    dump_lp(lp, path)

    lines = path.read_text().splitlines()
    n_vars, n_rows = int(lines[1].split()[1]), int(lines[1].split()[3])
    cost = [float(v) for v in lines[4].split()]
    rows, rhs = [], []
    for line in lines[6 : 6 + n_rows]:
        cells = line.split()
        assert cells[-2] == "="
        rows.append([float(v) for v in cells[:-2]])
        rhs.append(float(cells[-1]))
    assert len(cost) == n_vars and len(rows) == n_rows

    external = linprog(cost, A_eq=rows, b_eq=rhs, bounds=(0, None), method="highs")
    assert external.status == 0
    ours = simplex_minimize(lp)
    assert ours.objective == pytest.approx(external.fun, rel=1e-9, abs=1e-9)


def test_dump_layout(tmp_path):
    spec = tiny_problem([[1.0, -2.0]], [3.0], 0.25)
    path = tmp_path / "form.lp"
    dump_lp(formulate(spec), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "LADLASSO-LP 1"
    assert lines[1] == "vars 6 rows 1"
    assert lines[3] == "minimize"
    assert lines[5] == "subject-to"
    assert lines[-1] == "bounds all >= 0"
    # cost row round-trips
    assert [float(v) for v in lines[4].split()] == [0.25, 0.25, 0.25, 0.25, 1.0, 1.0]
    row = lines[6].split()
    assert row[-2] == "="
    assert float(row[-1]) == 3.0
