import math

import numpy as np
import pytest

from graph_boundary import families as fam
from graph_boundary.boundary import boundary_set
from graph_boundary.errors import EmptyX, LengthMismatch, XCoversAllVertices, ZeroFunction
from graph_boundary.graph import all_pairs_distances, degree_extremes
from graph_boundary.spectral import (
    HotspotsVerdict,
    Mode,
    apply_laplacian,
    dirichlet_energy,
    dirichlet_laplacian,
    dirichlet_laplacian_via_subgraph,
    faber_krahn_report,
    hotspots_ratio_check,
    hotspots_report,
    neumann_second_eigenpair,
    rayleigh_quotient,
    smallest_dirichlet_eigenpair,
)
from graph_boundary.walks import solve_dirichlet, walk_distributions

SQRT2 = math.sqrt(2)


def _setup(g):
    d = all_pairs_distances(g)
    return g, d, boundary_set(g, d)


def test_apply_laplacian_examples():
    assert np.allclose(apply_laplacian(fam.grid(3), np.full(9, 3.5)), 0)
    assert apply_laplacian(fam.path(3), [0, 1, 0]).tolist() == [-1, 2, -1]
    assert apply_laplacian(fam.complete(2), [1, 0]).tolist() == [1, -1]
    with pytest.raises(LengthMismatch):
        apply_laplacian(fam.path(3), [1, 2])


def test_dirichlet_matrix_examples():
    assert dirichlet_laplacian(fam.path(3), {0, 2}).matrix().tolist() == [[2]]
    M = dirichlet_laplacian(fam.path(5), {0, 4}).matrix()
    assert M.tolist() == [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    assert dirichlet_laplacian(fam.complete(2), {1}).matrix().tolist() == [[1]]
    with pytest.raises(EmptyX):
        dirichlet_laplacian(fam.path(3), set())
    with pytest.raises(XCoversAllVertices):
        dirichlet_laplacian(fam.path(3), {0, 1, 2})


def test_rayleigh_examples():
    assert rayleigh_quotient(fam.grid(3), np.ones(9)) == 0
    assert rayleigh_quotient(fam.path(3), [0, 1, 0]) == 2
    assert rayleigh_quotient(fam.complete(2), [1, -1]) == 2
    with pytest.raises(ZeroFunction):
        rayleigh_quotient(fam.path(3), [0, 0, 0])


def test_dirichlet_eigen_examples():
    p = smallest_dirichlet_eigenpair(fam.path(3), {0, 2})
    assert p.value == pytest.approx(2)
    assert np.allclose(p.vector, [0, 1, 0])
    assert smallest_dirichlet_eigenpair(fam.path(5), {0, 4}).value == pytest.approx(2 - SQRT2, abs=1e-12)
    assert smallest_dirichlet_eigenpair(fam.complete(2), {1}).value == pytest.approx(1)


def test_faber_krahn_examples():
    r = faber_krahn_report(*_setup(fam.path(5)))
    assert r.lambda1 == pytest.approx(2 - SQRT2, abs=1e-9)
    assert r.bound == pytest.approx(1 / 64) and r.holds
    r = faber_krahn_report(*_setup(fam.path(3)))
    assert r.lambda1 == pytest.approx(2) and r.bound == pytest.approx(1 / 16)
    r = faber_krahn_report(*_setup(fam.complete(4)))
    assert r.interior_empty and r.holds and r.lambda1 is None


def test_neumann_examples():
    pair, mult, _ = neumann_second_eigenpair(fam.path(3))
    assert pair.value == pytest.approx(1) and mult == 1
    f = pair.vector / pair.vector[0]
    assert np.allclose(f, [1, 0, -1])
    pair, _, _ = neumann_second_eigenpair(fam.path(4))
    assert pair.value == pytest.approx(2 - SQRT2)
    pair, _, _ = neumann_second_eigenpair(fam.complete(2))
    assert pair.value == pytest.approx(2)
    assert np.allclose(pair.vector / pair.vector[0], [1, -1])
    _, mult, basis = neumann_second_eigenpair(fam.cycle(6))
    assert mult == 2 and basis.shape == (6, 2)


def test_hotspots_examples():
    for n in range(2, 15):
        assert hotspots_report(fam.path(n), _setup(fam.path(n))[2]).overall is HotspotsVerdict.HOLDS
    g, _, bd = _setup(fam.cycle(6))
    assert len(bd) == 6
    assert hotspots_report(g, bd).overall is HotspotsVerdict.HOLDS
    g, _, bd = _setup(fam.grid(5))
    assert hotspots_report(g, bd).overall is HotspotsVerdict.HOLDS


def test_ratio_examples():
    r = hotspots_ratio_check(*_setup(fam.path(4)))
    assert r.applicable and r.ratio <= 1 <= r.bound and r.holds
    r = hotspots_ratio_check(*_setup(fam.path(3)))
    assert not r.applicable and r.reason == "lambda2 >= 1"
    assert not hotspots_ratio_check(*_setup(fam.complete(2))).applicable


def test_constructions_agree(cases):
    for c in cases:
        if c.has_interior:
            a = dirichlet_laplacian(c.g, c.bd.members).matrix()
            b = dirichlet_laplacian_via_subgraph(c.g, c.bd.members)
            assert np.array_equal(a, b), c.name


def test_view_modes():
    g = fam.path(4)
    neu = dirichlet_laplacian(g, {0}).graph.laplacian_matrix()
    assert np.allclose(neu @ np.ones(4), 0)
    view = dirichlet_laplacian(g, {0, 3})
    assert view.mode is Mode.DIRICHLET
    assert np.all(np.linalg.eigvalsh(view.matrix()) > 0)
    assert view.extend(np.array([5.0, 6.0])).tolist() == [0, 5, 6, 0]


def test_quadratic_form_identity(cases, rng):
    for c in cases[::5]:
        if not c.has_interior:
            continue
        view = dirichlet_laplacian(c.g, c.bd.members)
        M = view.matrix()
        for _ in range(100):
            x = rng.normal(size=len(view.free))
            f = view.extend(x)
            assert dirichlet_energy(c.g, f) == pytest.approx(x @ M @ x, rel=1e-10)


def test_lambda1_is_min_rayleigh(cases, rng):
    for c in cases[::4]:
        if not c.has_interior:
            continue
        pair = smallest_dirichlet_eigenpair(c.g, c.bd.members)
        assert pair.value > 0
        assert pair.residual < 1e-9
        assert np.all(pair.vector >= 0)
        view = dirichlet_laplacian(c.g, c.bd.members)
        X = rng.normal(size=(1000, len(view.free)))
        M = view.matrix()
        rq = np.einsum("ij,jk,ik->i", X, M, X) / np.einsum("ij,ij->i", X, X)
        assert rq.min() >= pair.value - 1e-9
        assert rayleigh_quotient(c.g, pair.vector) == pytest.approx(pair.value, abs=1e-9)


def test_faber_krahn_corpus(cases):
    for c in cases:
        r = faber_krahn_report(c.g, c.dist, c.bd)
        assert r.holds, c.name
        assert r.interior_empty == (not c.has_interior)


def test_walk_mass_lower_bound(cases):
    for c in cases:
        if not c.has_interior:
            continue
        pair = smallest_dirichlet_eigenpair(c.g, c.bd.members)
        mindeg, _ = degree_extremes(c.g)
        q = pair.value / mindeg
        v0 = int(np.argmax(pair.vector))
        inner = ~c.bd.mask(c.g.n)
        for wd in walk_distributions(c.g, c.bd.members, v0, 4 * c.dist.diameter**2):
            assert wd.mass[inner].sum() >= max(0.0, 1 - q) ** wd.step - 1e-9, (c.name, wd.step)


def test_maximum_principle(cases, rng):
    for c in cases[::6]:
        if not c.has_interior:
            continue
        fixed = c.bd.mask(c.g.n)
        data = np.where(fixed, rng.normal(size=c.g.n), 0.0)
        # harmonic off X: L u = 0 there, u = data on X
        rhs = -(c.g.laplacian_matrix() @ data)
        u, _ = solve_dirichlet(c.g, fixed, rhs)
        u = u + data
        assert np.allclose(apply_laplacian(c.g, u)[~fixed], 0, atol=1e-9)
        assert u.max() <= u[fixed].max() + 1e-10


def test_hotspots_families():
    rng = np.random.default_rng(3)
    graphs = [fam.path(n) for n in range(2, 25)] + [fam.cycle(n) for n in range(3, 25)]
    graphs += [fam.grid(r, c) for r in range(2, 9) for c in range(r, 9)]
    graphs += [fam.random_tree(int(rng.integers(3, 60)), rng) for _ in range(60)]
    for g in graphs:
        _, _, bd = _setup(g)
        assert hotspots_report(g, bd).overall is not HotspotsVerdict.VIOLATED


def test_ratio_corpus(cases):
    for c in cases:
        r = hotspots_ratio_check(c.g, c.dist, c.bd)
        if r.applicable:
            assert r.holds, (c.name, r.ratio, r.bound)
        else:
            assert r.reason
