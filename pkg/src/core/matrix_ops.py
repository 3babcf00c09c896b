"""Distance computation and conversion between matrix and graph views."""

import logging
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist, squareform

from src.models.data_models import DataMatrix, DistanceMetric
from src.models.graph_models import RelationGraph, WeightSemantics
from src.utils.errors import DataError

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-12


def distance_matrix(data: DataMatrix, metric: DistanceMetric = DistanceMetric.EUCLIDEAN) -> np.ndarray:
    """N×N dissimilarities between data rows: symmetric, zero diagonal, non-negative.

    Cosine distance is 1 - cosine similarity; rows of zero norm have no direction
    and are rejected.
    """
    metric = DistanceMetric(metric)
    values = data.values
    if metric == DistanceMetric.COSINE:
        norms = np.linalg.norm(values, axis=1)
        if np.any(norms == 0.0):
            raise DataError(f"Cosine distance undefined for zero vector at row {int(np.argmin(norms))}")
        condensed = pdist(values, metric="cosine")
    else:
        condensed = pdist(values, metric="euclidean")

    np.clip(condensed, 0.0, None, out=condensed)
    dist = squareform(condensed)
    logger.debug("Computed %s distance matrix for %d items", metric.value, data.rows)
    return dist


def check_distance_matrix(D: np.ndarray, name: str = "distance matrix") -> np.ndarray:
    D = np.asarray(D, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise DataError(f"{name} must be square, got shape {D.shape}")
    if not np.all(np.isfinite(D)):
        raise DataError(f"{name} contains non-finite entries")
    if np.any(np.diag(D) != 0.0):
        raise DataError(f"{name} has a non-zero diagonal")
    if not np.allclose(D, D.T, rtol=0.0, atol=SYMMETRY_TOLERANCE):
        i, j = np.unravel_index(np.argmax(np.abs(D - D.T)), D.shape)
        raise DataError(f"{name} is not symmetric: D[{i}][{j}]={D[i, j]} vs D[{j}][{i}]={D[j, i]}")
    return D


def graph_from_matrix(D: np.ndarray, semantics: WeightSemantics = WeightSemantics.DISSIMILARITY) -> RelationGraph:
    """Complete graph with one edge per unordered pair, weight D[i][j]."""
    D = check_distance_matrix(D)
    n = D.shape[0]
    rows, cols = np.triu_indices(n, k=1)
    return RelationGraph(n_vertices=n, rows=rows, cols=cols, weights=D[rows, cols], semantics=semantics)


def matrix_from_graph(g: RelationGraph, fill: Optional[float] = None) -> np.ndarray:
    """Dense view of a graph. Missing pairs get `fill` (∞ for dissimilarities, else 0)."""
    if fill is None:
        fill = np.inf if g.semantics == WeightSemantics.DISSIMILARITY else 0.0
    dense = g.to_dense(fill=fill)
    np.fill_diagonal(dense, 0.0)
    return dense


def nearest_neighbor_indices(D: np.ndarray, k: int) -> np.ndarray:
    """Row-wise exact k nearest neighbors (self excluded), ties broken by smaller index."""
    n = D.shape[0]
    if not (1 <= k < n):
        raise DataError(f"k={k} must satisfy 1 <= k < N={n}")
    ranked = np.array(D, dtype=np.float64, copy=True)
    np.fill_diagonal(ranked, np.inf)
    # stable sort keeps the lower index first among equal distances
    order = np.argsort(ranked, axis=1, kind="stable")
    return order[:, :k]


def squared_distances(coords: np.ndarray) -> np.ndarray:
    """N×N squared Euclidean distances between rows of `coords`."""
    return squareform(pdist(coords, metric="sqeuclidean"))


def pairwise_force_sum(coeff: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """Σ_j coeff[i, j] (y_i - y_j) for every i, without forming the N×N×dim differences."""
    return coeff.sum(axis=1)[:, None] * coords - coeff @ coords
