"""Random walks absorbed on a vertex set.

Exact quantities (hitting potential, walk distributions, the interval-walk
tails) are computed by linear algebra; exit times are also sampled by
Monte Carlo with counter-based streams for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import EmptyAbsorbingSet, GraphBoundaryError, WalkCapExceeded
from .graph import Graph
from .rng import RngSeed, bounded_index, philox4x32, split64

#: Interior systems up to this size are solved by dense Cholesky.
DIRECT_SOLVE_LIMIT = 2000
DEFAULT_WALK_CAP = 10**9


@dataclass(frozen=True)
class HittingPotential:
    phi: np.ndarray
    absorbing: frozenset[int]
    residual: float

    def __getitem__(self, v: int) -> float:
        return float(self.phi[v])


@dataclass(frozen=True)
class WalkDistribution:
    mass: np.ndarray
    step: int


@dataclass(frozen=True)
class ExitTimeEstimate:
    mean: float
    stderr: float
    trials: int


def _absorbing_mask(g: Graph, absorbing: Iterable[int]) -> np.ndarray:
    mask = np.zeros(g.n, dtype=bool)
    idx = list(absorbing)
    if not idx:
        raise EmptyAbsorbingSet("absorbing set must be nonempty")
    mask[idx] = True
    return mask


def solve_dirichlet(g: Graph, fixed: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    """Solve ``(D - A) u = rhs`` on the free vertices with ``u = 0`` on ``fixed``.

    The free block is symmetric positive definite whenever ``g`` is
    connected and ``fixed`` is nonempty.  Returns the zero-extended
    solution and the max-norm residual of the free equations.
    """
    free = np.flatnonzero(~fixed)
    u = np.zeros(g.n)
    if free.size == 0:
        return u, 0.0
    L = g.laplacian_sparse()[free][:, free]
    b = np.asarray(rhs, dtype=float)[free]
    if free.size <= DIRECT_SOLVE_LIMIT:
        x = sla.solve(L.toarray(), b, assume_a="pos")
    else:
        x, info = spla.cg(L, b, rtol=1e-14, atol=0.0, maxiter=50 * free.size)
        if info != 0:
            raise GraphBoundaryError(f"conjugate gradient did not converge (info={info})")
    u[free] = x
    residual = float(np.max(np.abs(L @ x - b)))
    return u, residual


def hitting_potential(g: Graph, absorbing: Iterable[int]) -> HittingPotential:
    """Expected number of steps for a walk from each vertex to reach ``absorbing``.

    Solves ``(D - A) phi = deg`` off the absorbing set with ``phi = 0`` on it.
    """
    mask = _absorbing_mask(g, absorbing)
    phi, residual = solve_dirichlet(g, mask, g.degree_array.astype(float))
    phi.setflags(write=False)
    return HittingPotential(phi=phi, absorbing=frozenset(np.flatnonzero(mask).tolist()), residual=residual)


# -- Monte Carlo ----------------------------------------------------------


def _csr(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    A = g.adjacency_sparse
    return A.indptr.astype(np.int64), A.indices.astype(np.int64)


def _exit_times(
    g: Graph,
    mask: np.ndarray,
    v0: int,
    seed: int,
    streams: np.ndarray,
    cap: int,
) -> np.ndarray:
    """Lock-step simulation of one walk per stream id."""
    indptr, indices = _csr(g)
    deg = g.degree_array.astype(np.uint64)
    key = split64(seed)
    streams = np.asarray(streams, dtype=np.uint64)
    s_lo = streams & np.uint64(0xFFFFFFFF)
    s_hi = streams >> np.uint64(32)

    out = np.zeros(len(streams), dtype=np.int64)
    if mask[v0]:
        return out
    active = np.arange(len(streams))
    pos = np.full(len(streams), v0, dtype=np.int64)
    words = None
    k = 0
    while active.size:
        if k >= cap:
            raise WalkCapExceeded(f"walk from {v0} not absorbed within {cap} steps")
        # Block (k // 2) of each stream carries two 64-bit draws.
        if k % 2 == 0:
            blk_lo, blk_hi = split64(k // 2)
            words = philox4x32((blk_lo, blk_hi, s_lo[active], s_hi[active]), key)
            hi, lo = words[0], words[1]
        else:
            hi, lo = words[2], words[3]
        p = pos[active]
        choice = bounded_index(hi, lo, deg[p])
        p = indices[indptr[p] + choice]
        pos[active] = p
        k += 1
        done = mask[p]
        if done.any():
            out[active[done]] = k
            keep = ~done
            active = active[keep]
            words = tuple(w[keep] for w in words)
    return out


def simulate_exit_time(
    g: Graph,
    absorbing: Iterable[int],
    v0: int,
    rng: RngSeed,
    cap: int = DEFAULT_WALK_CAP,
) -> int:
    """Steps until a uniform random walk from ``v0`` first enters ``absorbing``.

    The trajectory is a pure function of ``(rng.seed, rng.stream)``.
    """
    mask = _absorbing_mask(g, absorbing)
    return int(_exit_times(g, mask, v0, rng.seed, np.array([rng.stream]), cap)[0])


def estimate_exit_time(
    g: Graph,
    absorbing: Iterable[int],
    v0: int,
    trials: int,
    seed: int,
    cap: int = DEFAULT_WALK_CAP,
    batch: int = 1 << 16,
) -> ExitTimeEstimate:
    """Monte Carlo mean exit time; trial ``t`` uses stream ``t`` of ``seed``."""
    if trials < 1:
        raise ValueError("trials must be positive")
    RngSeed(seed)
    mask = _absorbing_mask(g, absorbing)
    total = 0.0
    total_sq = 0.0
    for start in range(0, trials, batch):
        streams = np.arange(start, min(trials, start + batch), dtype=np.uint64)
        t = _exit_times(g, mask, v0, seed, streams, cap).astype(float)
        total += t.sum()
        total_sq += (t * t).sum()
    mean = total / trials
    if trials > 1:
        var = max(total_sq - trials * mean * mean, 0.0) / (trials - 1)
        stderr = math.sqrt(var / trials)
    else:
        stderr = 0.0
    return ExitTimeEstimate(mean=mean, stderr=stderr, trials=trials)


# -- exact distributions ---------------------------------------------------


def absorbed_transition(g: Graph, absorbing: Iterable[int]) -> sp.csr_matrix:
    """Row-stochastic matrix of the walk that stays put once absorbed."""
    mask = _absorbing_mask(g, absorbing)
    A = g.adjacency_sparse.astype(float)
    scale = np.where(mask, 0.0, 1.0 / g.degree_array)
    P = sp.diags(scale) @ A + sp.diags(mask.astype(float))
    return P.tocsr()


def walk_distributions(
    g: Graph, absorbing: Iterable[int], v0: int, steps: int
) -> Iterator[WalkDistribution]:
    """Yield the walk distribution for ``k = 0, 1, ..., steps``."""
    PT = absorbed_transition(g, absorbing).T.tocsr()
    mass = np.zeros(g.n)
    mass[v0] = 1.0
    yield WalkDistribution(mass=mass.copy(), step=0)
    for k in range(1, steps + 1):
        mass = PT @ mass
        yield WalkDistribution(mass=mass.copy(), step=k)


def walk_distribution(g: Graph, absorbing: Iterable[int], v0: int, k: int) -> WalkDistribution:
    if k < 0:
        raise ValueError("k must be nonnegative")
    for dist in walk_distributions(g, absorbing, v0, k):
        pass
    return dist


# -- the walk on {-m, ..., m} ---------------------------------------------


def interval_tail_exact(m: int, x0: int, k: int) -> Fraction:
    """Exact ``P(T >= k)`` for the simple walk on ``{-m..m}`` absorbed at ``+-m``.

    Counts the length ``k - 1`` paths that stay strictly inside; every
    such path has probability ``2**-(k-1)``.
    """
    if m < 1 or abs(x0) > m or k < 0:
        raise ValueError("need m >= 1, |x0| <= m, k >= 0")
    if k == 0:
        return Fraction(1)
    if abs(x0) == m:
        return Fraction(0)
    counts = [0] * (2 * m - 1)  # interior states -m+1..m-1
    counts[x0 + m - 1] = 1
    for _ in range(k - 1):
        nxt = [0] * len(counts)
        for i, c in enumerate(counts):
            if c:
                if i > 0:
                    nxt[i - 1] += c
                if i + 1 < len(counts):
                    nxt[i + 1] += c
        counts = nxt
    return Fraction(sum(counts), 1 << (k - 1))


def interval_tails(m: int, x0: int, kmax: int) -> list[Fraction]:
    """``[P(T >= k) for k in 0..kmax]`` in one pass."""
    out = [Fraction(1)]
    if abs(x0) == m:
        return out + [Fraction(0)] * kmax
    counts = [0] * (2 * m - 1)
    counts[x0 + m - 1] = 1
    for k in range(1, kmax + 1):
        out.append(Fraction(sum(counts), 1 << (k - 1)))
        nxt = [0] * len(counts)
        for i, c in enumerate(counts):
            if c:
                if i > 0:
                    nxt[i - 1] += c
                if i + 1 < len(counts):
                    nxt[i + 1] += c
        counts = nxt
    return out


def interval_mean_exact(m: int, x0: int) -> Fraction:
    """``E[T] = sum_k P(T >= k)`` summed in closed form as ``1^T (I - Q)^-1 e_x0``.

    ``Q`` is the substochastic interior transition operator; the system is
    solved by exact rational elimination.
    """
    if abs(x0) >= m:
        return Fraction(0)
    size = 2 * m - 1
    # Solve (I - Q) t = 1 for t (Q symmetric); tridiagonal Thomas in Fractions.
    a = [Fraction(-1, 2)] * size  # sub/super diagonal
    b = [Fraction(1)] * size
    d = [Fraction(1)] * size
    cp = [Fraction(0)] * size
    dp = [Fraction(0)] * size
    cp[0] = a[0] / b[0]
    dp[0] = d[0] / b[0]
    for i in range(1, size):
        denom = b[i] - a[i] * cp[i - 1]
        cp[i] = a[i] / denom
        dp[i] = (d[i] - a[i] * dp[i - 1]) / denom
    t = [Fraction(0)] * size
    t[-1] = dp[-1]
    for i in range(size - 2, -1, -1):
        t[i] = dp[i] - cp[i] * t[i + 1]
    return t[x0 + m - 1]


def interval_tail_bound_holds(m: int, prob: Fraction, k: int) -> bool:
    """Exact test of ``prob <= 4 * 2**(-k / (2 m^2))``.

    Both sides are raised to the power ``2 m^2`` so the comparison is
    between rationals.
    """
    e = 2 * m * m
    return prob**e <= Fraction(4**e, 2**k)
