"""Distance energies of probability measures on the vertex set.

``energy(mu) = sum_{v,w} f(d(v,w)) mu(v) mu(w)``, diagonal included.  For
convex nondecreasing kernels, moving the mass of an interior vertex evenly
onto its neighbours never lowers the energy (and strictly raises it for
strictly convex kernels), so maximisers can be pushed onto the boundary.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .boundary import BoundarySet, boundary_set, interior_check
from .errors import (
    KernelNotAdmissible,
    NonTermination,
    NotAMeasure,
    VertexInBoundary,
)
from .graph import DistanceMatrix, Graph

MEASURE_TOL = 1e-12
PURGE_ITER_CAP = 10**6


@dataclass(frozen=True)
class Kernel:
    """A distance kernel tabulated at ``0, 1, ..., len(values) - 1``."""

    values: np.ndarray

    @classmethod
    def power(cls, alpha: float, diam: int) -> "Kernel":
        return cls(np.arange(diam + 1, dtype=float) ** alpha)

    @classmethod
    def from_callable(cls, fn: Callable[[int], float], diam: int) -> "Kernel":
        return cls(np.array([fn(k) for k in range(diam + 1)], dtype=float))

    @property
    def nondecreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) >= 0))

    @property
    def _second_differences(self) -> np.ndarray:
        v = self.values
        return v[2:] - 2 * v[1:-1] + v[:-2]

    @property
    def convex(self) -> bool:
        return bool(np.all(self._second_differences >= 0))

    @property
    def strictly_convex(self) -> bool:
        return bool(np.all(self._second_differences > 0))

    def matrix(self, dist: DistanceMatrix) -> np.ndarray:
        if len(self.values) <= dist.diameter:
            raise ValueError(
                f"kernel tabulated up to {len(self.values) - 1} but diameter is {dist.diameter}"
            )
        return self.values[dist.array]


@dataclass(frozen=True)
class EnergyMaximum:
    mu_star: np.ndarray
    energy: float
    interior_mass: float


def check_measure(mu, n: int) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (n,):
        raise NotAMeasure(f"expected {n} masses, got shape {mu.shape}")
    if np.any(mu < 0):
        raise NotAMeasure("negative mass")
    if abs(mu.sum() - 1.0) > MEASURE_TOL:
        raise NotAMeasure(f"total mass {mu.sum()!r} is not 1")
    return mu


def energy(g: Graph, dist: DistanceMatrix, kernel: Kernel, mu) -> float:
    mu = check_measure(mu, g.n)
    F = kernel.matrix(dist)
    return float(mu @ F @ mu)


def _require_admissible(kernel: Kernel) -> None:
    if not (kernel.nondecreasing and kernel.convex):
        raise KernelNotAdmissible("kernel must be convex and nondecreasing")


def improvement_move(g: Graph, dist: DistanceMatrix, kernel: Kernel, mu, a: int) -> np.ndarray:
    """Spread the mass at interior vertex ``a`` evenly over its neighbours.

    ``mu(a) == 0`` returns ``mu`` unchanged.  Kernels must be convex and
    nondecreasing; the energy then does not drop, and it rises strictly
    when the kernel is strictly convex and ``mu(a) > 0``.
    """
    mu = check_measure(mu, g.n)
    _require_admissible(kernel)
    if not interior_check(g, dist, a):
        raise VertexInBoundary(f"vertex {a} is a boundary vertex")
    return _move(g, mu, a)


def _move(g: Graph, mu: np.ndarray, a: int) -> np.ndarray:
    nu = mu.copy()
    if mu[a] == 0:
        return nu
    share = mu[a] / g.degrees[a]
    nu[list(g.adjacency[a])] += share
    nu[a] = 0.0
    return nu


def purge_interior(
    g: Graph,
    dist: DistanceMatrix,
    boundary: BoundarySet,
    kernel: Kernel,
    mu,
    eps: float = 1e-12,
    max_iter: int = PURGE_ITER_CAP,
) -> np.ndarray:
    """Apply improvement moves, heaviest interior vertex first (lowest id on
    ties), until the interior carries at most ``eps`` mass."""
    mu = check_measure(mu, g.n).copy()
    _require_admissible(kernel)
    inner = np.flatnonzero(~boundary.mask(g.n))
    if inner.size == 0:
        return mu
    for _ in range(max_iter):
        masses = mu[inner]
        if masses.sum() <= eps:
            return mu
        a = int(inner[np.argmax(masses)])
        mu = _move(g, mu, a)
    raise NonTermination(f"interior mass still {mu[inner].sum():.3e} after {max_iter} moves")


# -- solvers ---------------------------------------------------------------


def _face_stationary_point(F: np.ndarray, support: np.ndarray) -> np.ndarray | None:
    """Stationary point of ``x^T F x`` on the relative interior of a face.

    Solves ``F_S x = lam 1, sum x = 1``; returns ``None`` when the system is
    inconsistent or the solution leaves the simplex.
    """
    k = len(support)
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = F[np.ix_(support, support)]
    K[:k, k] = -1.0
    K[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol, *_ = np.linalg.lstsq(K, rhs, rcond=None)
    if np.max(np.abs(K @ sol - rhs)) > 1e-9:
        return None
    x = sol[:k]
    if np.any(x < -1e-12):
        return None
    out = np.zeros(len(F))
    out[support] = np.clip(x, 0.0, None)
    return out / out.sum()


def _face_stationary_points(F: np.ndarray, supports: np.ndarray) -> np.ndarray:
    """Batched :func:`_face_stationary_point` over equal-size supports; rows
    that are inconsistent or infeasible are dropped."""
    m, k = supports.shape
    K = np.zeros((m, k + 1, k + 1))
    K[:, :k, :k] = F[supports[:, :, None], supports[:, None, :]]
    K[:, :k, k] = -1.0
    K[:, k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.pinv(K) @ rhs
    ok = np.max(np.abs(K @ sol[..., None] - rhs[:, None])[..., 0], axis=1) <= 1e-9
    x = sol[:, :k]
    ok &= np.all(x >= -1e-12, axis=1)
    out = np.zeros((int(ok.sum()), len(F)))
    rows = np.arange(len(out))[:, None]
    out[rows, supports[ok]] = np.clip(x[ok], 0.0, None)
    return out / out.sum(axis=1, keepdims=True)


def _kkt_violators(F: np.ndarray, mu: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    grad = F @ mu
    value = mu @ grad
    return np.flatnonzero((mu <= 0) & (grad > value + tol * max(1.0, abs(value))))


def _replicator(F: np.ndarray, mu: np.ndarray, iters: int, tol: float = 1e-12) -> np.ndarray:
    # Multiplicative ascent on one measure or a stack of them (rows); F must
    # be entrywise positive.  The face solve afterwards supplies the last digits.
    for _ in range(iters):
        grad = mu @ F
        nxt = mu * grad / (mu * grad).sum(axis=-1, keepdims=True)
        if np.max(np.abs(nxt - mu)) < tol:
            return nxt
        mu = nxt
    return mu


def _local_ascent(F: np.ndarray, mu: np.ndarray, polish_iters: int, rounds: int = 8) -> np.ndarray:
    Fpos = F - F.min() + 1.0  # same maximisers on the simplex
    best = mu
    for _ in range(rounds):
        mu = _replicator(Fpos, mu, polish_iters)
        support = np.flatnonzero(mu > 1e-7)
        cand = _face_stationary_point(F, support)
        if cand is not None and cand @ F @ cand >= mu @ F @ mu - 1e-15:
            mu = cand
        if mu @ F @ mu >= best @ F @ best:
            best = mu
        bad = _kkt_violators(F, mu)
        if bad.size == 0:
            break
        # Re-seed the most profitable missing vertex and keep climbing.
        j = bad[np.argmax((F @ mu)[bad])]
        mu = 0.9 * mu
        mu[j] += 0.1
    return best


def maximize_energy(
    g: Graph,
    dist: DistanceMatrix,
    boundary: BoundarySet,
    kernel: Kernel,
    restarts: int = 16,
    seed: int = 0,
    polish_iters: int = 2000,
) -> EnergyMaximum:
    """Multistart ascent for the maximal energy measure.

    Start 0 is uniform on the boundary; further starts are Dirichlet(1)
    draws seeded by ``(seed, restart)``.  Each start is climbed by
    replicator updates, refined to the stationary point of its support and
    pushed off the interior with :func:`purge_interior`.  Heuristic: the
    global maximum is not guaranteed.
    """
    _require_admissible(kernel)
    F = kernel.matrix(dist)
    bmask = boundary.mask(g.n)
    starts = [bmask / bmask.sum()]
    for r in range(1, max(restarts, 1)):
        rng = np.random.default_rng([seed, r])
        starts.append(rng.dirichlet(np.ones(g.n)))

    starts = _replicator(F - F.min() + 1.0, np.array(starts), polish_iters)
    best = None
    for mu in starts:
        mu = _local_ascent(F, mu, polish_iters)
        mu = purge_interior(g, dist, boundary, kernel, mu / mu.sum())
        mu = _local_ascent(F, mu, polish_iters)
        mu = purge_interior(g, dist, boundary, kernel, mu / mu.sum())
        val = float(mu @ F @ mu)
        if best is None or val > best[1]:
            best = (mu, val)
    mu, val = best
    return EnergyMaximum(mu_star=mu, energy=val, interior_mass=float(mu[~bmask].sum()))


@lru_cache(maxsize=16)
def simplex_grid(n: int, steps: int) -> np.ndarray:
    """All points of the simplex with coordinates in ``{0, 1/steps, ..., 1}``, one per row."""
    if n == 1:
        return np.ones((1, 1))
    m = steps + n - 1
    bars = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(m), n - 1)), dtype=np.int64
    ).reshape(-1, n - 1)
    edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), m)])
    grid = (np.diff(edges, axis=1) - 1) / steps
    grid.flags.writeable = False
    return grid


def brute_force_max(
    g: Graph, dist: DistanceMatrix, kernel: Kernel, grid_steps: int = 20
) -> EnergyMaximum:
    """Exhaustive maximiser for small graphs.

    Scans the simplex grid, then solves for the stationary point on every
    face of the simplex.  The maximum of a quadratic over the simplex is
    attained at such a point, so the face sweep is exact up to linear
    algebra roundoff; it costs ``2**n`` small solves.
    """
    F = kernel.matrix(dist)
    n = g.n
    best_mu, best_val = None, -np.inf
    X = simplex_grid(n, grid_steps)
    for lo in range(0, len(X), 65536):
        best_mu, best_val = _best_of(F, X[lo : lo + 65536], best_mu, best_val)
    for r in range(1, n + 1):
        supports = np.array(list(itertools.combinations(range(n), r)))
        X = _face_stationary_points(F, supports)
        if len(X):
            best_mu, best_val = _best_of(F, X, best_mu, best_val)
    inner = ~boundary_set(g, dist).mask(n)
    return EnergyMaximum(mu_star=best_mu, energy=best_val, interior_mass=float(best_mu[inner].sum()))


def _best_of(F, X, best_mu, best_val):
    vals = ((X @ F) * X).sum(axis=1)
    i = int(np.argmax(vals))
    if vals[i] > best_val:
        return X[i], float(vals[i])
    return best_mu, best_val
