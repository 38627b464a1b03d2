"""The shared test corpus: small exhaustive graphs plus structured and random families."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from graph_boundary import families as fam
from graph_boundary.boundary import BoundarySet, boundary_set
from graph_boundary.graph import DistanceMatrix, Graph, all_pairs_distances


@dataclass(frozen=True)
class Case:
    name: str
    g: Graph
    dist: DistanceMatrix
    bd: BoundarySet

    @property
    def has_interior(self) -> bool:
        return len(self.bd) < self.g.n


def _case(name, g) -> Case:
    dist = all_pairs_distances(g)
    return Case(name, g, dist, boundary_set(g, dist))


@lru_cache(maxsize=None)
def corpus() -> tuple[Case, ...]:
    rng = np.random.default_rng(20240611)
    graphs = []
    for n in range(2, 7):
        graphs += [(f"conn{n}_{i}", g) for i, g in enumerate(fam.connected_graphs(n))]
    graphs += [(f"path{n}", fam.path(n)) for n in range(2, 31)]
    graphs += [(f"cycle{n}", fam.cycle(n)) for n in range(3, 17)]
    graphs += [(f"grid{r}x{c}", fam.grid(r, c)) for r in range(2, 8) for c in range(r, 8)]
    graphs += [(f"star{k}", fam.star(k)) for k in range(2, 11)]
    graphs += [(f"complete{n}", fam.complete(n)) for n in range(2, 9)]
    graphs += [(f"bintree{d}", fam.binary_tree(d)) for d in range(1, 6)]
    for i in range(40):
        graphs.append((f"rtree{i}", fam.random_tree(int(rng.integers(5, 81)), rng)))
    for i in range(40):
        n = int(rng.integers(5, 41))
        p = float(rng.choice([0.03, 0.08, 0.15, 0.3]))
        graphs.append((f"rconn{i}", fam.random_connected(n, p, rng)))
    return tuple(_case(name, g) for name, g in graphs)


def corpus_ids() -> list[str]:
    return [c.name for c in corpus()]
