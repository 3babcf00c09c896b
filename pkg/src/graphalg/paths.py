"""Shortest paths and connected components over relationship graphs."""

import logging

import numpy as np
from scipy.sparse.csgraph import connected_components as _cs_components
from scipy.sparse.csgraph import dijkstra

from src.models.graph_models import PathCost, RelationGraph, WeightSemantics
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)


def edge_costs(g: RelationGraph, cost: PathCost) -> np.ndarray:
    """Per-edge path lengths for the requested conversion.

    WEIGHT is only meaningful on dissimilarity graphs and ONE_MINUS_WEIGHT only on
    weights in [0, 1]; anything else is refused rather than silently converted.
    """
    cost = PathCost(cost)
    if cost == PathCost.HOP:
        return np.ones(g.n_edges)
    if cost == PathCost.WEIGHT:
        if g.semantics != WeightSemantics.DISSIMILARITY:
            raise ConfigError(
                f"path cost 'weight' needs dissimilarity weights, graph has {g.semantics.value}; "
                "use 'hop' or 'one_minus_weight'"
            )
        if g.n_edges and g.weights.min() < 0.0:
            k = int(np.argmin(g.weights))
            raise DataError(f"Negative edge weight {g.weights[k]} on ({g.rows[k]}, {g.cols[k]})")
        return np.asarray(g.weights, dtype=np.float64)
    if g.n_edges and (g.weights.max() > 1.0 or g.weights.min() < 0.0):
        raise ConfigError("path cost 'one_minus_weight' needs weights in [0, 1]")
    return 1.0 - g.weights


def single_source_shortest_paths(g: RelationGraph, source: int, cost: PathCost = PathCost.WEIGHT) -> np.ndarray:
    """Distances from `source` to every vertex; unreachable vertices get inf."""
    if not (0 <= source < g.n_vertices):
        raise DataError(f"Source {source} out of range [0, {g.n_vertices})")
    costs = edge_costs(g, cost)
    return dijkstra(g.to_csgraph(costs), directed=False, indices=source)


def all_pairs_shortest_paths(g: RelationGraph, cost: PathCost = PathCost.WEIGHT) -> np.ndarray:
    costs = edge_costs(g, cost)
    dist = dijkstra(g.to_csgraph(costs), directed=False)
    logger.debug("All-pairs shortest paths over %d vertices (%s cost)", g.n_vertices, PathCost(cost).value)
    return dist


def connected_components(g: RelationGraph) -> np.ndarray:
    """Component id per vertex, contiguous from 0 in order of first vertex."""
    _, labels = _cs_components(g.adjacency(pattern_only=True).tocsr(), directed=False)
    return labels.astype(np.int64)


def component_count(g: RelationGraph) -> int:
    if g.n_vertices == 0:
        return 0
    return int(connected_components(g).max()) + 1


def require_connected(g: RelationGraph, operation: str) -> None:
    n = component_count(g)
    if n != 1:
        raise DataError(f"{operation} needs a connected graph, input has {n} components")
