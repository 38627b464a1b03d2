"""Kirchhoff and Dirichlet Laplacians, their low eigenpairs, and the
Faber-Krahn and hot-spots reports built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np
import scipy.linalg as sla
from scipy.sparse.csgraph import connected_components

from .boundary import BoundarySet
from .errors import DegenerateGraph, EmptyX, LengthMismatch, SpectrumTooLarge, XCoversAllVertices, ZeroFunction
from .graph import DistanceMatrix, Graph, degree_extremes

#: Dense eigendecompositions are refused above this size.
SPECTRUM_CAP = 4000
POSITIVE_GAP = 1e-8  # times maxdeg
MULTIPLICITY_RTOL = 1e-6
EXTREMUM_RTOL = 1e-8  # times ||f||_inf


class Mode(str, Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True, eq=False)
class LaplacianView:
    graph: Graph
    mode: Mode
    X: frozenset[int] = frozenset()

    @property
    def free(self) -> np.ndarray:
        """Vertex ids indexing the rows of :meth:`matrix`."""
        if self.mode is Mode.NEUMANN:
            return np.arange(self.graph.n)
        return np.array([v for v in range(self.graph.n) if v not in self.X], dtype=np.int64)

    def matrix(self) -> np.ndarray:
        L = self.graph.laplacian_matrix()
        if self.mode is Mode.NEUMANN:
            return L
        free = self.free
        return L[np.ix_(free, free)]

    def extend(self, x: np.ndarray) -> np.ndarray:
        """Zero-extend a vector on the free vertices to all of ``V``."""
        out = np.zeros(self.graph.n)
        out[self.free] = x
        return out


@dataclass(frozen=True)
class Eigenpair:
    value: float
    vector: np.ndarray
    residual: float


@dataclass(frozen=True)
class FaberKrahnReport:
    lambda1: float | None
    bound: float
    q: float | None
    holds: bool
    interior_empty: bool = False


class HotspotsVerdict(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ExtremaVerdict:
    max_in_boundary: bool
    min_in_boundary: bool

    @property
    def ok(self) -> bool:
        return self.max_in_boundary and self.min_in_boundary


@dataclass(frozen=True)
class HotspotsReport:
    lambda2: float
    multiplicity: int
    verdicts: tuple[ExtremaVerdict, ...]
    overall: HotspotsVerdict


@dataclass(frozen=True)
class RatioCheck:
    ratio: float | None
    bound: float | None
    applicable: bool
    holds: bool
    reason: str = ""


def _check_size(n: int) -> None:
    if n > SPECTRUM_CAP:
        raise SpectrumTooLarge(f"dense spectrum refused for n={n} > {SPECTRUM_CAP}")


def apply_laplacian(g: Graph, f) -> np.ndarray:
    """``(Lf)(v) = sum over neighbours w of (f(v) - f(w))``."""
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n,):
        raise LengthMismatch(f"expected {g.n} values, got shape {f.shape}")
    return g.degree_array * f - g.adjacency_sparse @ f


def dirichlet_energy(g: Graph, f) -> float:
    f = np.asarray(f, dtype=float)
    e = g.edge_array
    return float(np.sum((f[e[:, 0]] - f[e[:, 1]]) ** 2))


def rayleigh_quotient(g: Graph, f) -> float:
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n,):
        raise LengthMismatch(f"expected {g.n} values, got shape {f.shape}")
    denom = float(f @ f)
    if denom == 0.0:
        raise ZeroFunction("Rayleigh quotient of the zero function")
    return dirichlet_energy(g, f) / denom


def _validate_X(g: Graph, X: Iterable[int]) -> frozenset[int]:
    X = frozenset(int(v) for v in X)
    if not X:
        raise EmptyX("Dirichlet set must be nonempty")
    if len(X) >= g.n:
        raise XCoversAllVertices("Dirichlet set covers every vertex; no free vertices")
    return X


def dirichlet_laplacian(g: Graph, X: Iterable[int]) -> LaplacianView:
    """``L`` with the rows and columns of ``X`` deleted."""
    return LaplacianView(graph=g, mode=Mode.DIRICHLET, X=_validate_X(g, X))


def dirichlet_laplacian_via_subgraph(g: Graph, X: Iterable[int]) -> np.ndarray:
    """Same matrix built the other way round: Laplacian of the subgraph on
    ``V \\ X`` plus, on the diagonal, the number of neighbours in ``X``."""
    X = _validate_X(g, X)
    free = [v for v in range(g.n) if v not in X]
    pos = {v: i for i, v in enumerate(free)}
    M = np.zeros((len(free), len(free)))
    for v in free:
        i = pos[v]
        for w in g.adjacency[v]:
            if w in pos:
                M[i, i] += 1
                M[i, pos[w]] -= 1
            else:
                M[i, i] += 1
    return M


def smallest_dirichlet_eigenpair(g: Graph, X: Iterable[int]) -> Eigenpair:
    """Ground state of the Dirichlet Laplacian, zero-extended and entrywise >= 0.

    The free block splits into irreducible blocks along the components of
    the subgraph on ``V \\ X``; the block with the smallest bottom
    eigenvalue (lowest vertex id on ties) supplies a Perron vector, which
    is single-signed.
    """
    view = dirichlet_laplacian(g, X)
    _check_size(len(view.free))
    M = view.matrix()
    ncomp, labels = connected_components(
        (M != 0) & ~np.eye(len(M), dtype=bool), directed=False
    )
    best = None
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        vals, vecs = sla.eigh(M[np.ix_(idx, idx)], subset_by_index=[0, 0])
        if best is None or vals[0] < best[0]:
            best = (float(vals[0]), idx, vecs[:, 0])
    lam, idx, vec = best
    x = np.zeros(len(M))
    x[idx] = np.abs(vec)
    x /= np.linalg.norm(x)
    residual = float(np.linalg.norm(M @ x - lam * x))
    return Eigenpair(value=lam, vector=view.extend(x), residual=residual)


def faber_krahn_report(g: Graph, dist: DistanceMatrix, boundary: BoundarySet) -> FaberKrahnReport:
    if g.n < 2:
        raise DegenerateGraph("Faber-Krahn bound undefined for a single vertex")
    mindeg, _ = degree_extremes(g)
    diam = dist.diameter
    bound = 0.25 * mindeg / diam**2
    if len(boundary) >= g.n:
        return FaberKrahnReport(lambda1=None, bound=bound, q=None, holds=True, interior_empty=True)
    pair = smallest_dirichlet_eigenpair(g, boundary.members)
    lam = pair.value
    return FaberKrahnReport(
        lambda1=lam, bound=bound, q=lam / mindeg, holds=bool(lam >= bound - 1e-9)
    )


def neumann_second_eigenpair(g: Graph) -> tuple[Eigenpair, int, np.ndarray]:
    """Smallest positive Laplacian eigenvalue, its multiplicity and an
    orthonormal basis (columns) of its eigenspace."""
    if g.n < 2:
        raise ValueError("need at least two vertices")
    _check_size(g.n)
    L = g.laplacian_matrix()
    vals, vecs = np.linalg.eigh(L)
    _, maxdeg = degree_extremes(g)
    positive = np.flatnonzero(vals > POSITIVE_GAP * maxdeg)
    j = int(positive[0])
    lam = float(vals[j])
    group = [k for k in positive if abs(vals[k] - lam) <= MULTIPLICITY_RTOL * lam]
    basis = vecs[:, group]
    f = basis[:, 0]
    residual = float(np.linalg.norm(L @ f - lam * f))
    return Eigenpair(value=lam, vector=f, residual=residual), len(group), basis


def extremal_sets(f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vertices within ``EXTREMUM_RTOL * ||f||_inf`` of the max and of the min."""
    tol = EXTREMUM_RTOL * float(np.max(np.abs(f)))
    return np.flatnonzero(f >= f.max() - tol), np.flatnonzero(f <= f.min() + tol)


def hotspots_report(g: Graph, boundary: BoundarySet) -> HotspotsReport:
    pair, mult, basis = neumann_second_eigenpair(g)
    bmask = boundary.mask(g.n)
    verdicts = []
    for j in range(basis.shape[1]):
        f = basis[:, j]
        # -f swaps the two sets, so one orientation covers both signs
        argmax, argmin = extremal_sets(f)
        verdicts.append(
            ExtremaVerdict(
                max_in_boundary=bool(bmask[argmax].any()),
                min_in_boundary=bool(bmask[argmin].any()),
            )
        )
    oks = {v.ok for v in verdicts}
    if oks == {True}:
        overall = HotspotsVerdict.HOLDS
    elif mult > 1 and len(oks) > 1:
        overall = HotspotsVerdict.DEGENERATE
    else:
        overall = HotspotsVerdict.VIOLATED
    return HotspotsReport(lambda2=pair.value, multiplicity=mult, verdicts=tuple(verdicts), overall=overall)


def hotspots_exponent(g: Graph, dist: DistanceMatrix) -> int:
    """Number of walk steps after which half the walkers are absorbed."""
    _, maxdeg = degree_extremes(g)
    return 2 * maxdeg * dist.diameter**2


def hotspots_ratio_check(g: Graph, dist: DistanceMatrix, boundary: BoundarySet) -> RatioCheck:
    """Interior-to-boundary maximum ratio of the second eigenvector
    against ``(1 - lambda2 / mindeg) ** -K``, ``K = 2 maxdeg diam^2``.

    Both orientations ``f`` and ``-f`` with a positive boundary maximum are
    checked; the larger ratio is reported.
    """
    pair, mult, basis = neumann_second_eigenpair(g)
    lam = pair.value
    mindeg, _ = degree_extremes(g)
    if lam >= 1:
        return RatioCheck(None, None, False, True, "lambda2 >= 1")
    if mult > 1:
        return RatioCheck(None, None, False, True, "eigenspace not simple")
    bmask = boundary.mask(g.n)
    if bmask.all():
        return RatioCheck(None, None, False, True, "interior empty")
    K = hotspots_exponent(g, dist)
    log_bound = -K * math.log1p(-lam / mindeg)
    bound = math.exp(log_bound) if log_bound < 700 else math.inf
    ratios = []
    for f in (basis[:, 0], -basis[:, 0]):
        bmax = float(f[bmask].max())
        if bmax > 0:
            ratios.append(float(f[~bmask].max()) / bmax)
    if not ratios:
        return RatioCheck(None, bound, False, True, "boundary maximum nonpositive for both signs")
    ratio = max(ratios)
    return RatioCheck(ratio=ratio, bound=bound, applicable=True, holds=bool(ratio <= bound))
