"""Distance-based relationship recipes: complete graph, k-NNG, shared nearest neighbors."""

import logging
from typing import Optional, Tuple

import numpy as np
import scipy.sparse

from src.core.matrix_ops import distance_matrix, graph_from_matrix, nearest_neighbor_indices
from src.models.data_models import DataMatrix, DistanceMetric
from src.models.graph_models import RelationGraph, WeightSemantics

logger = logging.getLogger(__name__)


def _distances(data: DataMatrix, metric: DistanceMetric, distances: Optional[np.ndarray]) -> np.ndarray:
    return distance_matrix(data, metric) if distances is None else distances


def union_pairs(neighbors: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Unordered pairs {i, j} with j in neighbors[i] or i in neighbors[j], sorted."""
    n, k = neighbors.shape
    src = np.repeat(np.arange(n), k)
    dst = neighbors.ravel()
    lo, hi = np.minimum(src, dst), np.maximum(src, dst)
    keys = np.unique(lo * n + hi)
    return keys // n, keys % n


def pairwise_distance_graph(
    data: DataMatrix,
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
    distances: Optional[np.ndarray] = None,
) -> RelationGraph:
    """Complete dissimilarity graph with w(i, j) = δ_ij."""
    g = graph_from_matrix(_distances(data, metric, distances), WeightSemantics.DISSIMILARITY)
    logger.info("Complete distance graph: %d vertices, %d edges", g.n_vertices, g.n_edges)
    return g


def knn_graph_from_distances(D: np.ndarray, k: int) -> RelationGraph:
    rows, cols = union_pairs(nearest_neighbor_indices(D, k))
    return RelationGraph(
        n_vertices=D.shape[0], rows=rows, cols=cols, weights=D[rows, cols],
        semantics=WeightSemantics.DISSIMILARITY,
    )


def knn_graph(
    data: DataMatrix,
    k: int,
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
    distances: Optional[np.ndarray] = None,
) -> RelationGraph:
    """Symmetrized-union k-NN graph weighted by distance; every vertex has degree >= k."""
    g = knn_graph_from_distances(_distances(data, metric, distances), k)
    logger.info("k-NN graph (k=%d): %d vertices, %d edges", k, g.n_vertices, g.n_edges)
    return g


def snn_reweight(
    data: DataMatrix,
    k: int,
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
    distances: Optional[np.ndarray] = None,
) -> RelationGraph:
    """k-NN edge set reweighted by |kNN(i) ∩ kNN(j)| (integers in [0, k])."""
    D = _distances(data, metric, distances)
    neighbors = nearest_neighbor_indices(D, k)
    n = D.shape[0]
    rows, cols = union_pairs(neighbors)

    membership = scipy.sparse.csr_matrix(
        (np.ones(neighbors.size), (np.repeat(np.arange(n), k), neighbors.ravel())),
        shape=(n, n),
    )
    shared = (membership @ membership.T).tocsr()
    counts = np.asarray(shared[rows, cols]).ravel()

    g = RelationGraph(
        n_vertices=n, rows=rows, cols=cols, weights=np.rint(counts),
        semantics=WeightSemantics.SIMILARITY,
    )
    logger.info("SNN graph (k=%d): %d edges, mean shared %.2f", k, g.n_edges, counts.mean() if len(counts) else 0.0)
    return g
