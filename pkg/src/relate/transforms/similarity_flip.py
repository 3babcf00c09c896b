"""Transform: turn distances into similarities with w' = 1 - w / w_max."""

import logging

from src.models.graph_models import RelationGraph, WeightSemantics
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)

_FLIPPED = {
    WeightSemantics.DISSIMILARITY: WeightSemantics.SIMILARITY,
    WeightSemantics.SIMILARITY: WeightSemantics.DISSIMILARITY,
}


def similarity_flip(g: RelationGraph) -> RelationGraph:
    """Reverse the weight order on the same edge set; results lie in [0, 1].

    The heaviest edge maps to 0, so a distance graph becomes a spring-layout
    attraction graph. Flipping a similarity graph yields a dissimilarity graph.
    """
    if g.semantics not in _FLIPPED:
        raise ConfigError("similarity_flip does not apply to probability graphs")
    if g.n_edges == 0:
        raise DataError("similarity_flip needs at least one edge")
    if g.weights.min() < 0.0:
        raise DataError("similarity_flip needs non-negative weights")
    w_max = float(g.weights.max())
    if w_max == 0.0:
        raise DataError("similarity_flip undefined: every edge weight is zero")

    flipped = g.with_weights(1.0 - g.weights / w_max, semantics=_FLIPPED[g.semantics])
    logger.debug("Flipped %d edge weights (w_max=%.6g)", g.n_edges, w_max)
    return flipped
