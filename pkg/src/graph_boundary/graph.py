"""Simple connected undirected graphs and their exact shortest-path metric."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Hashable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .errors import (
    Disconnected,
    DuplicateEdge,
    EmptyGraph,
    SelfLoop,
    VertexOutOfRange,
)

#: Graphs up to this many vertices get a full n x n distance table.
DEFAULT_DISTANCE_CAP = 5000


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple connected undirected graph on vertices ``0..n-1``.

    Build instances with :func:`build_graph`; the constructor does not
    validate.  ``labels`` maps dense ids back to the caller's vertex names
    when the graph was ingested from labelled input.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]
    labels: tuple[Hashable, ...] | None = field(default=None)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.n, self.adjacency))

    @property
    def num_edges(self) -> int:
        return sum(self.degrees) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges as sorted pairs ``(u, v)`` with ``u < v``."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    @cached_property
    def degree_array(self) -> np.ndarray:
        arr = np.asarray(self.degrees, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def edge_array(self) -> np.ndarray:
        """``(m, 2)`` integer array of the edges, ``u < v`` per row."""
        arr = np.asarray(self.edges(), dtype=np.int64).reshape(-1, 2)
        arr.setflags(write=False)
        return arr

    @cached_property
    def adjacency_sparse(self) -> sp.csr_matrix:
        e = self.edge_array
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(len(rows), dtype=np.int64)
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def adjacency_matrix(self) -> np.ndarray:
        return self.adjacency_sparse.toarray()

    def laplacian_matrix(self) -> np.ndarray:
        """Dense Kirchhoff Laplacian ``D - A`` as floats."""
        L = -self.adjacency_matrix().astype(float)
        L[np.diag_indices(self.n)] = self.degree_array
        return L

    def laplacian_sparse(self) -> sp.csr_matrix:
        D = sp.diags(self.degree_array.astype(float))
        return (D - self.adjacency_sparse.astype(float)).tocsr()


def _components(n: int, adjacency: Sequence[Sequence[int]]) -> list[list[int]]:
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for x in adjacency[u]:
                if not seen[x]:
                    seen[x] = True
                    comp.append(x)
                    queue.append(x)
        comps.append(sorted(comp))
    return comps


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int]],
    labels: Sequence[Hashable] | None = None,
) -> Graph:
    """Validate an edge list and return a :class:`Graph`.

    Raises
    ------
    EmptyGraph
        ``n < 1``.
    VertexOutOfRange, SelfLoop, DuplicateEdge
        Naming the offending edge.
    Disconnected
        Naming a vertex unreachable from vertex 0.
    """
    if n < 1:
        raise EmptyGraph(f"graph must have at least one vertex, got n={n}")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for e in edges:
        u, v = e
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge {(u, v)} has an endpoint outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        if v in nbrs[u]:
            raise DuplicateEdge(f"duplicate edge {(min(u, v), max(u, v))}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    adjacency = tuple(tuple(sorted(s)) for s in nbrs)
    comps = _components(n, adjacency)
    if len(comps) > 1:
        stray = comps[1][0]
        raise Disconnected(
            f"graph has {len(comps)} components; vertex {stray} is unreachable from 0"
        )
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != n:
            raise ValueError("labels must have one entry per vertex")
    return Graph(
        n=n,
        adjacency=adjacency,
        degrees=tuple(len(a) for a in adjacency),
        labels=labels,
    )


def degree_extremes(g: Graph) -> tuple[int, int]:
    """``(min degree, max degree)``; both 0 for the single-vertex graph."""
    return min(g.degrees), max(g.degrees)


def bfs_row(g: Graph, source: int) -> np.ndarray:
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for x in g.adjacency[u]:
            if dist[x] < 0:
                dist[x] = du
                queue.append(x)
    return dist


class DistanceMatrix:
    """Exact all-pairs hop distances.

    Below ``cap`` vertices the full table is materialised (``.array``);
    above it rows are produced by BFS on demand and memoised.
    """

    def __init__(self, g: Graph, cap: int = DEFAULT_DISTANCE_CAP):
        self.graph = g
        self.n = g.n
        self.cap = cap
        if g.n <= cap:
            if g.n == 1:
                table = np.zeros((1, 1), dtype=np.int64)
            else:
                table = shortest_path(
                    g.adjacency_sparse, method="D", directed=False, unweighted=True
                ).astype(np.int64)
            table.setflags(write=False)
            self._table = table
            self.diameter = int(table.max())
        else:
            self._table = None
            self._row = lru_cache(maxsize=cap)(self._bfs)
            self.diameter = max(int(self._bfs(v).max()) for v in range(g.n))

    def _bfs(self, v: int) -> np.ndarray:
        row = bfs_row(self.graph, v)
        row.setflags(write=False)
        return row

    @property
    def dense(self) -> bool:
        return self._table is not None

    @property
    def array(self) -> np.ndarray:
        if self._table is None:
            raise MemoryError(
                f"n={self.n} exceeds the dense distance cap {self.cap}; use row()"
            )
        return self._table

    def row(self, v: int) -> np.ndarray:
        if self._table is not None:
            return self._table[v]
        return self._row(v)

    def __call__(self, v: int, w: int) -> int:
        return int(self.row(v)[w])

    def __getitem__(self, vw: tuple[int, int]) -> int:
        return self(*vw)


def all_pairs_distances(g: Graph, cap: int = DEFAULT_DISTANCE_CAP) -> DistanceMatrix:
    return DistanceMatrix(g, cap=cap)


def is_path_graph(g: Graph) -> bool:
    """True iff ``g`` is a path (``K_1`` counts as the trivial path)."""
    if g.n == 1:
        return True
    return g.num_edges == g.n - 1 and max(g.degrees) <= 2
