"""Shape graphs of layouts and edge-set faithfulness."""

import logging

import numpy as np

from src.models.data_models import Layout
from src.models.graph_models import RelationGraph
from src.models.report_models import ShapeGraphSpec
from src.relate.neighbors import knn_graph_from_distances
from src.utils.errors import DataError

logger = logging.getLogger(__name__)


def shape_graph(layout: Layout, k: int) -> RelationGraph:
    """Symmetrized-union k-NN graph over layout coordinates (Euclidean)."""
    checked = ShapeGraphSpec(k=k, source=layout)
    return knn_graph_from_distances(checked.source.distance_matrix(), checked.k)


def faithfulness(g1: RelationGraph, g2: RelationGraph) -> float:
    """Jaccard similarity of the two edge sets over unordered pairs; weights ignored.

    Two empty edge sets count as identical (1.0).
    """
    if g1.n_vertices != g2.n_vertices:
        raise DataError(f"Graphs differ in vertex count: {g1.n_vertices} vs {g2.n_vertices}")
    a, b = g1.edge_keys(), g2.edge_keys()
    union = np.union1d(a, b)
    if len(union) == 0:
        return 1.0
    return len(np.intersect1d(a, b, assume_unique=True)) / len(union)


def layout_faithfulness(layout_a: Layout, layout_b: Layout, k: int) -> float:
    """Faithfulness between the k-NN shape graphs of two layouts of the same items."""
    layout_b.require_points(layout_a.n_points, "first layout")
    return faithfulness(shape_graph(layout_a, k), shape_graph(layout_b, k))
