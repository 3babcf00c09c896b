"""Layout quality metrics against the high-dimensional source.

Neighbor sets use the same exact ranking as the relate stage: self excluded,
equal distances broken by the smaller index.
"""

import logging
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist

from src.core.matrix_ops import check_distance_matrix, distance_matrix, nearest_neighbor_indices
from src.models.data_models import DataMatrix, DistanceMetric, Layout
from src.utils.errors import DataError

logger = logging.getLogger(__name__)


def source_distances(
    data: Optional[DataMatrix],
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
    distances: Optional[np.ndarray] = None,
) -> np.ndarray:
    """High-dimensional distance matrix, either given or computed from the data."""
    if distances is not None:
        return check_distance_matrix(np.asarray(distances, dtype=np.float64), "source distances")
    if data is None:
        raise DataError("Need either the data matrix or its distance matrix")
    return distance_matrix(data, metric)


def _membership(neighbors: np.ndarray) -> np.ndarray:
    n = neighbors.shape[0]
    member = np.zeros((n, n), dtype=bool)
    member[np.arange(n)[:, None], neighbors] = True
    return member


def _ranks(D: np.ndarray) -> np.ndarray:
    """ranks[i, j] = position of j in i's neighbor order, 1 for the nearest."""
    n = D.shape[0]
    order = nearest_neighbor_indices(D, n - 1)
    ranks = np.zeros((n, n), dtype=np.int64)
    np.put_along_axis(ranks, order, np.tile(np.arange(1, n), (n, 1)), axis=1)
    return ranks


def stress(layout: Layout, D: np.ndarray) -> float:
    """Kruskal stress-1 between layout distances and the source distances."""
    D = check_distance_matrix(np.asarray(D, dtype=np.float64))
    n = D.shape[0]
    layout.require_points(n, "distance matrix")
    omega = D[np.triu_indices(n, k=1)]
    denominator = float((omega ** 2).sum())
    if denominator == 0.0:
        raise DataError("Stress is undefined for an all-zero distance matrix")
    d = pdist(layout.coords)
    return float(np.sqrt(((d - omega) ** 2).sum() / denominator))


def neighborhood_preservation(
    data: Optional[DataMatrix],
    layout: Layout,
    k: int,
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
    distances: Optional[np.ndarray] = None,
) -> float:
    """Mean fraction of each item's k data-space neighbors that are also layout neighbors."""
    D = source_distances(data, metric, distances)
    layout.require_points(D.shape[0], "data")
    shared = _membership(nearest_neighbor_indices(D, k)) & _membership(
        nearest_neighbor_indices(layout.distance_matrix(), k)
    )
    return float(shared.sum(axis=1).mean() / k)


def _rank_penalty(D_ranked: np.ndarray, D_other: np.ndarray, k: int) -> float:
    """1 - normalized Σ (rank - k) over points in the k-NN of D_other but not of D_ranked."""
    n = D_ranked.shape[0]
    if not (1 <= k < n / 2.0):
        raise DataError(f"k={k} must satisfy 1 <= k < N/2 = {n / 2.0}")
    ranks = _ranks(D_ranked)
    missing = _membership(nearest_neighbor_indices(D_other, k)) & ~_membership(nearest_neighbor_indices(D_ranked, k))
    penalty = float(((ranks - k) * missing).sum())
    return 1.0 - 2.0 / (n * k * (2.0 * n - 3.0 * k - 1.0)) * penalty


def trustworthiness(
    data: Optional[DataMatrix],
    layout: Layout,
    k: int,
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
    distances: Optional[np.ndarray] = None,
) -> float:
    """Penalizes layout neighbors that are far away in data space, by their data-space rank."""
    D = source_distances(data, metric, distances)
    layout.require_points(D.shape[0], "data")
    return _rank_penalty(D, layout.distance_matrix(), k)


def continuity(
    data: Optional[DataMatrix],
    layout: Layout,
    k: int,
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
    distances: Optional[np.ndarray] = None,
) -> float:
    """Penalizes data neighbors that the layout pushed away, by their layout rank."""
    D = source_distances(data, metric, distances)
    layout.require_points(D.shape[0], "data")
    return _rank_penalty(layout.distance_matrix(), D, k)


def neighbor_hit_per_point(layout: Layout, labels: Optional[np.ndarray], k: int) -> np.ndarray:
    """Per point, the fraction of its k layout neighbors that share its label."""
    if labels is None:
        raise DataError("neighbor_hit needs class labels; load the data with a label column")
    labels = np.asarray(labels)
    if len(labels) != layout.n_points:
        raise DataError(f"Got {len(labels)} labels for {layout.n_points} points")
    neighbors = nearest_neighbor_indices(layout.distance_matrix(), k)
    return (labels[neighbors] == labels[:, None]).mean(axis=1)


def neighbor_hit(layout: Layout, labels: Optional[np.ndarray], k: int) -> float:
    """Mean fraction of each point's k layout neighbors that share its label."""
    return float(neighbor_hit_per_point(layout, labels, k).mean())
