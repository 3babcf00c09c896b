"""Transform: complete graph of geodesic (shortest-path) distances over a sparse graph."""

import logging

import numpy as np

from src.graphalg.paths import all_pairs_shortest_paths, require_connected
from src.models.graph_models import PathCost, RelationGraph, WeightSemantics

logger = logging.getLogger(__name__)


def geodesic_complete_graph(knn: RelationGraph) -> RelationGraph:
    """w(i, j) = weighted shortest-path length between i and j in `knn`.

    The input is only an auxiliary structure for measuring distances along the
    manifold; it must be connected.
    """
    require_connected(knn, "Geodesic transform")
    dist = all_pairs_shortest_paths(knn, PathCost.WEIGHT)
    n = knn.n_vertices
    rows, cols = np.triu_indices(n, k=1)
    g = RelationGraph(
        n_vertices=n, rows=rows, cols=cols, weights=dist[rows, cols],
        semantics=WeightSemantics.DISSIMILARITY,
    )
    logger.info("Geodesic graph: %d edges from %d-edge input", g.n_edges, knn.n_edges)
    return g
