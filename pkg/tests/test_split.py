import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from oamswipt import Infeasible, LinkBudget, NoiseModel, ReflectionState, compose
from oamswipt.split import (
    SplitProblem,
    feasibility,
    solve_split,
    solve_split_detailed,
    split_objective,
    split_problem,
)

SN = 1e-5


def random_problem(seed, n=2, frac=None):
    r = np.random.default_rng(seed)
    sc = SN * r.uniform(0.01, 1)
    S = SN * 10 ** r.uniform(-1, 1.5, n)
    I = SN * r.uniform(0, 1, n)
    a = 0.8 * (SN + S + I)
    frac = r.uniform(0.05, 0.95) if frac is None else frac
    return SplitProblem(S, I, a, LinkBudget(1.0, frac * a.sum(), 0.8, NoiseModel(SN, sc)))


@pytest.fixture(scope="module")
def paper_problem(channels, transforms, budget):
    H = transforms.W_prime @ compose(channels, ReflectionState.ones(16)) @ transforms.W
    return split_problem(H, budget)


def test_feasibility_boundaries():
    p = random_problem(0, frac=0.0)
    assert feasibility(p)[0]
    a = p.harvest_coefficients
    over = SplitProblem(p.signal, p.interference, a, LinkBudget(1.0, a.sum() * (1 + 1e-9), 0.8, p.budget.noise))
    ok, q_max = feasibility(over)
    assert not ok and q_max == pytest.approx(a.sum())
    with pytest.raises(Infeasible):
        solve_split(over)


def test_feasibility_matches_full_harvest(paper_problem, channels, transforms, budget):
    H = transforms.W_prime @ compose(channels, ReflectionState.ones(16)) @ transforms.W
    P = [budget.P_t_max / 8] * 8
    q_full = oracles.harvest(H, [1.0] * 8, P, budget.noise.sigma_n_sq, budget.eta)
    assert feasibility(paper_problem)[1] == pytest.approx(q_full, rel=1e-12)


def test_no_floor_means_no_split():
    np.testing.assert_array_equal(solve_split(random_problem(1, n=4, frac=0.0)).rho, 0.0)


def test_floor_at_maximum_forces_full_split():
    p = random_problem(2, n=3)
    full = SplitProblem(p.signal, p.interference, p.harvest_coefficients,
                        LinkBudget(1.0, p.harvest_coefficients.sum(), 0.8, p.budget.noise))
    np.testing.assert_allclose(solve_split(full).rho, 1.0)


def test_single_mode_is_tight():
    p = random_problem(3, n=1, frac=0.37)
    assert solve_split(p).rho[0] == pytest.approx(0.37, rel=1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_matches_grid_search(seed):
    p = random_problem(seed)
    sol = solve_split_detailed(p)
    rho, _ = oracles.split_grid(p.signal, p.B, p.C, p.harvest_coefficients, p.budget.Q_min)
    np.testing.assert_allclose(sol.split.rho, rho, atol=1e-3)
    # never worse than the plain square grid
    _, square = oracles.split_grid(p.signal, p.B, p.C, p.harvest_coefficients, p.budget.Q_min, boundary=False)
    assert split_objective(p, sol.split.rho) >= square - 1e-12
    q = p.harvest_coefficients @ sol.split.rho
    assert abs(q - p.budget.Q_min) <= 1e-8 * p.budget.Q_min
    assert sol.kkt_residual < 1e-8


@given(st.integers(0, 2**31), st.integers(1, 8), st.floats(0.0, 1.0))
@settings(max_examples=60, deadline=None)
def test_solution_is_feasible_and_tight(seed, n, frac):
    p = random_problem(seed, n=n, frac=frac)
    sol = solve_split_detailed(p)
    rho = sol.split.rho
    assert np.all((rho >= 0) & (rho <= 1))
    q = p.harvest_coefficients @ rho
    assert q >= p.budget.Q_min * (1 - 1e-10)
    if p.budget.Q_min > 0:
        assert q <= p.budget.Q_min * (1 + 1e-8)


@given(st.integers(0, 2**31), st.integers(2, 6))
@settings(max_examples=30, deadline=None)
def test_beats_random_feasible_points(seed, n):
    p = random_problem(seed, n=n)
    best = split_objective(p, solve_split(p).rho)
    r = np.random.default_rng(seed)
    a, Q = p.harvest_coefficients, p.budget.Q_min
    for _ in range(200):
        rho = r.random(n)
        if a @ rho >= Q:
            assert split_objective(p, rho) <= best + 1e-12


def test_rate_less_modes_harvest_for_free():
    p = random_problem(4, n=3, frac=0.3)
    S = p.signal.copy()
    S[1] = 0.0
    q = SplitProblem(S, p.interference, p.harvest_coefficients, p.budget)
    assert solve_split(q).rho[1] == 1.0


def test_paper_split(paper_problem, budget):
    sol = solve_split_detailed(paper_problem)
    assert sol.harvested == pytest.approx(budget.Q_min, rel=1e-8)
    assert sol.kkt_residual < 1e-8


def test_problem_validation():
    with pytest.raises(ValueError):
        SplitProblem(np.ones(2), np.zeros(2), np.array([-1.0, 1.0]), LinkBudget(1.0, 0.0, 0.5))
