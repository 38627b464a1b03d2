from fractions import Fraction

import numpy as np
import pytest

from graph_boundary import families as fam
from graph_boundary.errors import EmptyAbsorbingSet, WalkCapExceeded
from graph_boundary.graph import degree_extremes
from graph_boundary.rng import RngSeed
from graph_boundary.walks import (
    estimate_exit_time,
    hitting_potential,
    interval_mean_exact,
    interval_tail_bound_holds,
    interval_tail_exact,
    interval_tails,
    simulate_exit_time,
    solve_dirichlet,
    walk_distribution,
    walk_distributions,
)
from oracles import expected_hitting_steps, interval_mean_closed_form, walk_mass_by_matrix_power


def test_potential_examples():
    assert np.allclose(hitting_potential(fam.path(5), {0, 4}).phi, [0, 3, 4, 3, 0], atol=1e-12)
    assert np.all(hitting_potential(fam.complete(4), range(4)).phi == 0)
    pot = hitting_potential(fam.path(21), {0, 20})
    assert pot.phi[10] == pytest.approx(100, abs=1e-9)
    assert np.allclose(pot.phi, [x * (20 - x) for x in range(21)])
    with pytest.raises(EmptyAbsorbingSet):
        hitting_potential(fam.path(3), set())


def test_potential_dynamic_equation_and_oracle(cases):
    for c in cases:
        pot = hitting_potential(c.g, c.bd.members)
        phi = pot.phi
        assert np.all(phi[c.bd.mask(c.g.n)] == 0)
        for v in c.bd.interior(c.g.n):
            avg = np.mean(phi[list(c.g.adjacency[v])])
            assert phi[v] == pytest.approx(1 + avg, rel=1e-10)
        assert np.allclose(phi, expected_hitting_steps(c.g, c.bd.members), rtol=1e-9, atol=1e-9)


def test_potential_diameter_bound(cases):
    for c in cases:
        _, maxdeg = degree_extremes(c.g)
        assert hitting_potential(c.g, c.bd.members).phi.max() <= maxdeg * c.dist.diameter**2 + 1e-9


def test_iterative_branch_matches_direct():
    g = fam.grid(50)  # 2304 free vertices, beyond the dense limit
    fixed = np.zeros(g.n, dtype=bool)
    fixed[[0, g.n - 1]] = True
    u, res = solve_dirichlet(g, fixed, g.degree_array.astype(float))
    assert res < 1e-8
    free = ~fixed
    L = g.laplacian_matrix()[np.ix_(free, free)]
    ref = np.linalg.solve(L, g.degree_array[free].astype(float))
    assert np.allclose(u[free], ref, rtol=1e-7)


def test_simulate_examples():
    g = fam.complete(2)
    for s in range(10):
        assert simulate_exit_time(g, {1}, 0, RngSeed(s, s)) == 1
    assert simulate_exit_time(fam.path(5), {0, 4}, 0, RngSeed(1)) == 0


def test_simulation_reproducible_per_stream():
    g = fam.grid(5)
    est_times = [simulate_exit_time(g, {0, 24}, 12, RngSeed(99, t)) for t in range(40)]
    again = [simulate_exit_time(g, {0, 24}, 12, RngSeed(99, t)) for t in range(40)]
    assert est_times == again
    est = estimate_exit_time(g, {0, 24}, 12, 40, 99)
    assert est.mean == pytest.approx(np.mean(est_times))
    # batching does not change the streams
    assert estimate_exit_time(g, {0, 24}, 12, 40, 99, batch=7).mean == est.mean


def test_walk_cap():
    with pytest.raises(WalkCapExceeded):
        simulate_exit_time(fam.path(41), {0, 40}, 20, RngSeed(3), cap=5)


@pytest.mark.parametrize("n, v0, exact", [(5, 2, 4.0), (21, 10, 100.0)])
def test_estimate_matches_exact(n, v0, exact):
    est = estimate_exit_time(fam.path(n), {0, n - 1}, v0, 100_000, seed=7)
    assert abs(est.mean - exact) <= 3 * est.stderr


def test_estimate_absorbed_start():
    est = estimate_exit_time(fam.path(5), {0, 4}, 0, 100, seed=1)
    assert (est.mean, est.stderr) == (0.0, 0.0)


def test_estimator_randomised_cases():
    rng = np.random.default_rng(5)
    bad = 0
    for i in range(50):
        g = fam.random_connected(int(rng.integers(4, 20)), 0.2, rng)
        k = int(rng.integers(1, g.n))
        absorbing = set(rng.choice(g.n, size=k, replace=False).tolist())
        v0 = int(rng.integers(g.n))
        exact = hitting_potential(g, absorbing).phi[v0]
        est = estimate_exit_time(g, absorbing, v0, 4000, seed=i)
        if est.stderr == 0:
            assert est.mean == pytest.approx(exact)
        elif abs(est.mean - exact) > 4 * est.stderr:
            bad += 1
    assert bad == 0


def test_walk_distribution_examples():
    assert walk_distribution(fam.path(5), {0, 4}, 2, 0).mass.tolist() == [0, 0, 1, 0, 0]
    assert walk_distribution(fam.complete(2), {1}, 0, 1).mass.tolist() == [0, 1]
    assert walk_distribution(fam.path(3), {0, 2}, 1, 1).mass.tolist() == [0.5, 0, 0.5]


def test_walk_distributions_against_matrix_power(cases):
    for c in cases[::7]:
        v0 = int(np.argmax(hitting_potential(c.g, c.bd.members).phi))
        prev_absorbed = 0.0
        bmask = c.bd.mask(c.g.n)
        for wd in walk_distributions(c.g, c.bd.members, v0, 30):
            assert wd.mass.sum() == pytest.approx(1, abs=1e-12)
            absorbed = wd.mass[bmask].sum()
            assert absorbed >= prev_absorbed - 1e-15
            prev_absorbed = absorbed
            if wd.step in (1, 5, 30):
                ref = walk_mass_by_matrix_power(c.g, c.bd.members, v0, wd.step)
                assert np.allclose(wd.mass, ref, atol=1e-12)
        late = walk_distribution(c.g, c.bd.members, v0, 20 * c.g.n**2)
        assert late.mass[~bmask].sum() < 1e-3


def test_interval_examples():
    assert interval_tail_exact(4, 4, 1) == 0
    assert interval_tail_exact(4, -4, 1) == 0
    assert interval_tail_exact(1, 0, 1) == 1
    assert all(interval_tail_exact(1, 0, k) == 0 for k in range(2, 8))
    p = interval_tail_exact(5, 0, 200)
    assert p <= Fraction(1, 4)
    assert interval_tail_bound_holds(5, p, 200)


def test_interval_tails_consistent():
    for m in (1, 2, 3, 6):
        tails = interval_tails(m, 1 % m, 60)
        assert tails == [interval_tail_exact(m, 1 % m, k) for k in range(61)]
        assert all(a >= b for a, b in zip(tails, tails[1:]))


@pytest.mark.parametrize("m", range(1, 11))
def test_interval_mean_closed_form(m):
    for x in range(-m, m + 1):
        assert interval_mean_exact(m, x) == interval_mean_closed_form(m, x)


def test_interval_mean_is_tail_sum():
    # the truncated tail sum approaches the exact mean from below
    m = 3
    tails = interval_tails(m, 0, 400)
    partial = sum(tails[1:])
    assert partial <= interval_mean_exact(m, 0)
    assert float(interval_mean_exact(m, 0) - partial) < 1e-20
