"""Built-in graph families and exhaustive enumeration of small graphs."""

from __future__ import annotations

import heapq
import itertools
from functools import lru_cache
from typing import Iterator

import numpy as np

from .graph import Graph, build_graph

#: Connected unlabelled graphs on n vertices (OEIS A001349), n = 1..10.
CONNECTED_GRAPH_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117, 9: 261080, 10: 11716571}


def path(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return build_graph(n, itertools.combinations(range(n), 2))


def star(leaves: int) -> Graph:
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def grid(rows: int, cols: int | None = None) -> Graph:
    """``rows x cols`` grid; vertex ``(r, c)`` has id ``r * cols + c``."""
    cols = rows if cols is None else cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return build_graph(rows * cols, edges)


def binary_tree(depth: int) -> Graph:
    """Complete binary tree with ``depth`` levels below the root (root = 0)."""
    n = 2 ** (depth + 1) - 1
    return build_graph(n, [((i - 1) // 2, i) for i in range(1, n)])


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    """Uniform labelled tree via a random Pruefer sequence."""
    if n <= 2:
        return path(n)
    seq = rng.integers(0, n, size=n - 2).tolist()
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return build_graph(n, edges)


def random_connected(n: int, p: float, rng: np.random.Generator) -> Graph:
    """A random spanning tree plus independent extra edges with probability ``p``."""
    tree = random_tree(n, rng)
    edges = set(tree.edges())
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < p:
            edges.add((u, v))
    return build_graph(n, sorted(edges))


# -- exhaustive enumeration -------------------------------------------------


def _invariant_keys(adj: np.ndarray) -> list[bytes]:
    """Isomorphism-invariant fingerprints for a batch of adjacency matrices.

    Per vertex: walk counts (closed and total) of every length up to ``n``
    and the distance histogram; the sorted multiset of these rows is the key.
    """
    N, n, _ = adj.shape
    A = adj.astype(np.int64)
    feats = [A.sum(axis=2)]
    P = A.copy()
    reach = np.eye(n, dtype=bool)[None] | (A > 0)
    dist = np.where(A > 0, 1, n)
    dist[:, np.arange(n), np.arange(n)] = 0
    for k in range(2, n + 1):
        P = P @ A
        feats.append(np.diagonal(P, axis1=1, axis2=2))
        feats.append(P.sum(axis=2))
        newly = (P > 0) & ~reach
        dist[newly] = k
        reach |= P > 0
    for d in range(n):
        feats.append((dist == d).sum(axis=2))
    F = np.stack(feats, axis=2)  # (N, n, features)
    keys = []
    for i in range(N):
        rows = sorted(map(tuple, F[i].tolist()))
        keys.append(repr(rows).encode())
    return keys


def connected_graphs(n: int) -> list[Graph]:
    """All connected graphs on ``n`` vertices up to isomorphism (``n <= 8``).

    Every connected graph has a non-cut vertex, so each one arises from a
    connected graph on ``n - 1`` vertices plus a new vertex joined to a
    nonempty subset.  Candidates are deduplicated by an invariant
    fingerprint; the result size is checked against the known counts, which
    certifies that the fingerprint separated every isomorphism class.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > 8:
        raise ValueError("exhaustive enumeration is limited to n <= 8")
    return list(_connected_graphs(n))


@lru_cache(maxsize=None)
def _connected_graphs(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (build_graph(1, []),)
    smaller = _connected_graphs(n - 1)
    cands = []
    for g in smaller:
        base = np.zeros((n, n), dtype=np.uint8)
        base[: n - 1, : n - 1] = g.adjacency_matrix()
        for mask in range(1, 1 << (n - 1)):
            a = base.copy()
            nb = [i for i in range(n - 1) if mask >> i & 1]
            a[n - 1, nb] = 1
            a[nb, n - 1] = 1
            cands.append(a)
    adj = np.stack(cands)
    keys = _invariant_keys(adj)
    seen = {}
    for i, k in enumerate(keys):
        seen.setdefault(k, i)
    chosen = sorted(seen.values())
    out = []
    for i in chosen:
        a = adj[i]
        out.append(build_graph(n, list(zip(*np.nonzero(np.triu(a))))))
    expected = CONNECTED_GRAPH_COUNTS[n]
    if len(out) != expected:
        raise RuntimeError(
            f"fingerprint dedupe produced {len(out)} graphs on {n} vertices, expected {expected}"
        )
    return tuple(out)


def all_connected_graphs(max_n: int, min_n: int = 1) -> Iterator[Graph]:
    for n in range(min_n, max_n + 1):
        yield from connected_graphs(n)
