"""Hardy inequality with the hitting-time weight, and the positive
supersolution criterion behind it.

Weights ``W`` follow the potential convention: the quadratic form is
``sum_E (f(u) - f(v))^2 + sum_V W(v) f(v)^2``, so the Hardy weight enters
as ``W = -deg / phi``.  Entries of ``W`` may be NaN where it is undefined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .boundary import BoundarySet
from .errors import (
    FNotVanishingOnBoundary,
    InteriorEmpty,
    LengthMismatch,
    WUndefinedWhereFNonzero,
)
from .graph import Graph
from .spectral import apply_laplacian, dirichlet_energy, dirichlet_laplacian

SUPERSOLUTION_TOL = 1e-12


@dataclass(frozen=True)
class HardyWeight:
    W: np.ndarray
    phi: np.ndarray


@dataclass(frozen=True)
class HardyCheck:
    lhs: float
    rhs: float
    holds: bool


def hardy_weight(g: Graph, boundary: BoundarySet, phi) -> HardyWeight:
    """``W(v) = -deg(v) / phi(v)`` off the boundary, NaN on it."""
    phi = np.asarray(phi, dtype=float)
    W = np.full(g.n, np.nan)
    inner = ~boundary.mask(g.n)
    W[inner] = -g.degree_array[inner] / phi[inner]
    return HardyWeight(W=W, phi=phi)


def quadratic_form(g: Graph, W, f) -> float:
    W = np.asarray(W, dtype=float)
    f = np.asarray(f, dtype=float)
    if W.shape != (g.n,) or f.shape != (g.n,):
        raise LengthMismatch("W and f need one entry per vertex")
    support = f != 0
    if np.isnan(W[support]).any():
        bad = int(np.flatnonzero(support & np.isnan(W))[0])
        raise WUndefinedWhereFNonzero(f"W undefined at vertex {bad} where f = {f[bad]}")
    potential = float(np.sum(W[support] * f[support] ** 2))
    return dirichlet_energy(g, f) + potential


def aap_supersolution_check(g: Graph, W, phi, X: Iterable[int]) -> bool:
    """Does ``phi`` certify nonnegativity of the form for ``f`` vanishing on ``X``?

    Requires ``phi > 0`` and ``(D - A) phi + W phi >= 0`` on ``V \\ X``.
    """
    W = np.asarray(W, dtype=float)
    phi = np.asarray(phi, dtype=float)
    free = np.ones(g.n, dtype=bool)
    free[list(X)] = False
    if np.any(phi[free] <= 0):
        return False
    lhs = apply_laplacian(g, phi)[free] + W[free] * phi[free]
    return bool(np.all(lhs >= -SUPERSOLUTION_TOL))


def hardy_rhs(g: Graph, boundary: BoundarySet, phi, f) -> float:
    phi = np.asarray(phi, dtype=float)
    f = np.asarray(f, dtype=float)
    inner = ~boundary.mask(g.n)
    return float(np.sum(g.degree_array[inner] * f[inner] ** 2 / phi[inner]))


def hardy_check(g: Graph, boundary: BoundarySet, phi, f) -> HardyCheck:
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n,):
        raise LengthMismatch(f"expected {g.n} values, got shape {f.shape}")
    bmask = boundary.mask(g.n)
    if np.any(f[bmask] != 0):
        raise FNotVanishingOnBoundary("f must vanish on every boundary vertex")
    lhs = dirichlet_energy(g, f)
    rhs = hardy_rhs(g, boundary, phi, f)
    return HardyCheck(lhs=lhs, rhs=rhs, holds=bool(lhs >= rhs - 1e-9 * lhs))


def hardy_matrix(g: Graph, boundary: BoundarySet, phi) -> np.ndarray:
    """``L_2 - diag(deg / phi)`` on the interior."""
    if len(boundary) >= g.n:
        raise InteriorEmpty("every vertex is a boundary vertex")
    view = dirichlet_laplacian(g, boundary.members)
    free = view.free
    phi = np.asarray(phi, dtype=float)
    return view.matrix() - np.diag(g.degree_array[free] / phi[free])


def hardy_certificate(g: Graph, boundary: BoundarySet, phi) -> float:
    """Smallest eigenvalue of :func:`hardy_matrix`; nonnegative (up to
    roundoff) exactly when the Hardy inequality holds for every ``f``."""
    return float(np.linalg.eigvalsh(hardy_matrix(g, boundary, phi))[0])
