"""Minimum spanning tree (Kruskal with union-find)."""

import logging
from typing import List

import numpy as np

from src.graphalg.paths import require_connected
from src.models.graph_models import RelationGraph

logger = logging.getLogger(__name__)


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b. False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def minimum_spanning_tree(g: RelationGraph) -> RelationGraph:
    """Spanning tree of minimal total weight, as a subgraph of `g`.

    Edges are scanned by (weight, i, j), so equal-weight ties resolve the same way
    whatever order the edges were supplied in.
    """
    require_connected(g, "Minimum spanning tree")
    order = np.lexsort((g.cols, g.rows, g.weights))
    forest = DisjointSet(g.n_vertices)
    keep: List[int] = []
    for e in order:
        if forest.union(int(g.rows[e]), int(g.cols[e])):
            keep.append(int(e))
            if len(keep) == g.n_vertices - 1:
                break

    mask = np.zeros(g.n_edges, dtype=bool)
    mask[keep] = True
    tree = g.subgraph_edges(mask)
    logger.debug("MST: %d of %d edges, total weight %.6g", tree.n_edges, g.n_edges, tree.weights.sum())
    return tree
