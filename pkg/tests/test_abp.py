import numpy as np
import pytest

from graph_boundary import families as fam
from graph_boundary.abp import abp_check, abp_sharp_constant, abp_universal_bound, torsion_function
from graph_boundary.boundary import boundary_set
from graph_boundary.graph import all_pairs_distances
from graph_boundary.walks import hitting_potential, solve_dirichlet
from oracles import lp_abp_constant


def _setup(g):
    d = all_pairs_distances(g)
    return g, d, boundary_set(g, d)


def test_torsion_examples():
    assert np.allclose(torsion_function(fam.path(5), {0, 4}).u, [0, 1.5, 2, 1.5, 0])
    assert np.allclose(torsion_function(fam.complete(2), {1}).u, [1, 0])
    assert abp_sharp_constant(fam.path(11), {0, 10}) == pytest.approx(12.5)
    assert abp_sharp_constant(fam.path(5), {0, 4}) == pytest.approx(2)


def test_binary_tree_rooted_growth():
    vals = [abp_sharp_constant(fam.binary_tree(d), {0}) for d in range(3, 7)]
    assert all(b / a >= 1.8 for a, b in zip(vals, vals[1:]))


def test_binary_tree_leaves_within_bound():
    for depth in range(1, 7):
        g, d, bd = _setup(fam.binary_tree(depth))
        assert abp_sharp_constant(g, bd.members) <= abp_universal_bound(g, d)


def test_check_examples(rng):
    g, d, bd = _setup(fam.path(11))
    u = torsion_function(g, bd.members).u
    r = abp_check(g, d, bd, u)
    assert r.lhs == pytest.approx(12.5) and r.rhs == pytest.approx(400) and r.holds
    r = abp_check(g, d, bd, np.full(11, 3.0))
    assert r.lhs == r.rhs == 3.0
    g, d, bd = _setup(fam.grid(5))
    fixed = bd.mask(g.n)
    data = np.where(fixed, rng.normal(size=g.n), 0.0)
    h, _ = solve_dirichlet(g, fixed, -(g.laplacian_matrix() @ data))
    h = h + data
    r = abp_check(g, d, bd, h)
    assert r.lhs <= data[fixed].max() + 1e-10
    assert r.rhs == pytest.approx(data[fixed].max(), abs=1e-8)


def test_sharp_constant_matches_lp():
    for n in range(2, 6):
        for g in fam.connected_graphs(n):
            _, _, bd = _setup(g)
            if len(bd) == n:
                continue
            assert abp_sharp_constant(g, bd.members) == pytest.approx(
                lp_abp_constant(g, bd.members), abs=1e-6
            )


def test_universal_bound_corpus(cases):
    for c in cases:
        if c.has_interior:
            assert abp_sharp_constant(c.g, c.bd.members) <= abp_universal_bound(c.g, c.dist) + 1e-6


def test_random_functions(cases, rng):
    for c in cases[::2]:
        for f in rng.normal(size=(100, c.g.n)) * rng.uniform(0.1, 10):
            r = abp_check(c.g, c.dist, c.bd, f)
            assert r.holds and r.one_sided_holds
            assert r.one_sided_rhs <= r.rhs


def test_regular_graph_torsion_is_scaled_potential():
    for g in [fam.cycle(9), fam.complete(6), fam.grid(1, 2)] + [fam.cycle(n) for n in (4, 12)]:
        X = {0}
        u = torsion_function(g, X).u
        phi = hitting_potential(g, X).phi
        assert np.allclose(u, phi / g.degrees[0], rtol=1e-10)
