"""Transforms: minimum-spanning-tree backbone and backbone strengthening."""

import logging

import numpy as np

from src.graphalg.spanning import minimum_spanning_tree
from src.models.graph_models import RelationGraph, WeightSemantics
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)


def mst_backbone(g: RelationGraph) -> RelationGraph:
    """Spanning tree minimizing total distance; the graph's structural backbone."""
    if g.semantics != WeightSemantics.DISSIMILARITY:
        raise ConfigError(f"MST backbone needs dissimilarity weights, graph has {g.semantics.value}")
    return minimum_spanning_tree(g)


def backbone_strengthen(g: RelationGraph, backbone: RelationGraph, factor: float) -> RelationGraph:
    """Make backbone edges stronger by `factor`, leaving the edge set unchanged.

    Distances shrink (w / factor); similarities grow (w * factor).
    """
    if factor <= 0.0:
        raise ConfigError(f"strengthen factor must be > 0, got {factor}")
    if g.semantics == WeightSemantics.PROBABILITY:
        raise ConfigError("backbone_strengthen does not apply to probability graphs")
    if backbone.n_vertices != g.n_vertices:
        raise DataError(f"Backbone has {backbone.n_vertices} vertices, graph has {g.n_vertices}")

    keys = g.edge_keys()
    on_backbone = np.isin(keys, backbone.edge_keys())
    missing = np.setdiff1d(backbone.edge_keys(), keys)
    if len(missing):
        i, j = divmod(int(missing[0]), g.n_vertices)
        raise DataError(f"Backbone edge ({i}, {j}) is not in the graph ({len(missing)} missing)")

    weights = np.array(g.weights, copy=True)
    if g.semantics == WeightSemantics.DISSIMILARITY:
        weights[on_backbone] /= factor
    else:
        weights[on_backbone] *= factor
    logger.debug("Strengthened %d backbone edges by %g", int(on_backbone.sum()), factor)
    return g.with_weights(weights)
