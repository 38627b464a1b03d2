"""The combinatorial boundary of a graph.

A vertex ``v`` is a boundary vertex when some other vertex ``w`` sees the
average neighbour of ``v`` strictly closer than ``v`` itself.  All tests
here are carried out in integer arithmetic: the averaged inequality is
multiplied through by ``deg(v)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateGraph, InvalidWitness
from .graph import DistanceMatrix, Graph, degree_extremes


@dataclass(frozen=True)
class BoundarySet:
    members: frozenset[int]
    witness: dict[int, int]

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def mask(self, n: int) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[list(self.members)] = True
        return m

    def interior(self, n: int) -> list[int]:
        return [v for v in range(n) if v not in self.members]


@dataclass(frozen=True)
class LevelPartition:
    root: int
    levels: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class IsoperimetricReport:
    lhs: int
    rhs: Fraction
    holds: bool


def is_witnessed(g: Graph, dist: DistanceMatrix, v: int, w: int) -> bool:
    """``deg(v) * d(v, w) > sum of d(x, w)`` over neighbours ``x`` of ``v``."""
    if v == w:
        raise InvalidWitness(f"vertex {v} cannot witness itself")
    row = dist.row(w)
    return g.degrees[v] * int(row[v]) > int(sum(int(row[x]) for x in g.adjacency[v]))


def _neighbor_distance_sums(g: Graph, dist: DistanceMatrix) -> np.ndarray:
    # S[v, w] = sum over neighbours x of v of d(x, w); exact int64.
    return np.asarray(g.adjacency_sparse @ dist.array, dtype=np.int64)


def boundary_set(g: Graph, dist: DistanceMatrix) -> BoundarySet:
    """All boundary vertices, each with its smallest-id witness."""
    witness: dict[int, int] = {}
    if dist.dense:
        D = dist.array
        S = _neighbor_distance_sums(g, dist)
        hit = g.degree_array[:, None] * D > S
        has = hit.any(axis=1)
        first = hit.argmax(axis=1)
        for v in np.flatnonzero(has):
            witness[int(v)] = int(first[v])
    else:
        for v in range(g.n):
            for w in range(g.n):
                if w != v and is_witnessed(g, dist, v, w):
                    witness[v] = w
                    break
    return BoundarySet(members=frozenset(witness), witness=witness)


def level_partition(dist: DistanceMatrix, root: int) -> LevelPartition:
    row = dist.row(root)
    ecc = int(row.max())
    levels = tuple(tuple(int(v) for v in np.flatnonzero(row == i)) for i in range(ecc + 1))
    return LevelPartition(root=root, levels=levels)


def _closer_farther_counts(g: Graph, dist: DistanceMatrix, v: int) -> tuple[np.ndarray, np.ndarray]:
    # For every root w: number of neighbours of v in the level below / above v.
    nbrs = list(g.adjacency[v])
    rows = np.stack([dist.row(x) for x in nbrs]) if nbrs else np.zeros((0, g.n), np.int64)
    diff = rows - dist.row(v)[None, :]
    return (diff == -1).sum(axis=0), (diff == 1).sum(axis=0)


def boundary_via_levels(g: Graph, dist: DistanceMatrix) -> set[int]:
    """Boundary computed from the level structure around each root.

    ``v`` is included when, for some root ``w``, it has strictly more
    neighbours one level closer to ``w`` than one level farther away.
    Each root's BFS row serves as its level partition.
    """
    out = set()
    for v in range(g.n):
        closer, farther = _closer_farther_counts(g, dist, v)
        if np.any(closer > farther):
            out.add(v)
    return out


def interior_check(g: Graph, dist: DistanceMatrix, v: int) -> bool:
    """True iff, for every other vertex, ``v`` has at least as many
    neighbours farther from it as closer to it."""
    closer, farther = _closer_farther_counts(g, dist, v)
    mask = np.ones(g.n, dtype=bool)
    mask[v] = False
    return bool(np.all(farther[mask] >= closer[mask]))


def isoperimetric_report(
    g: Graph, dist: DistanceMatrix, boundary: BoundarySet
) -> IsoperimetricReport:
    if dist.diameter == 0:
        raise DegenerateGraph("isoperimetric ratio undefined for a single vertex")
    _, maxdeg = degree_extremes(g)
    rhs = Fraction(g.n, 2 * maxdeg * dist.diameter)
    lhs = len(boundary)
    return IsoperimetricReport(lhs=lhs, rhs=rhs, holds=lhs >= rhs)
