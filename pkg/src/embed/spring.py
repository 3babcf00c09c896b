"""Fruchterman–Reingold spring layout."""

import logging
from typing import Optional

import numpy as np

from src.core.matrix_ops import pairwise_force_sum, squared_distances
from src.embed.initialization import StartLayout, jitter_coincident, start_coords
from src.models.data_models import Layout
from src.models.graph_models import RelationGraph, WeightSemantics
from src.models.pipeline_models import EmbedParams
from src.utils import config as cfg
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

# distances below this are clamped when forming force magnitudes
MIN_SPRING_DISTANCE = 0.01


def _to_unit_box(coords: np.ndarray) -> np.ndarray:
    centered = coords - coords.min(axis=0)
    extent = float(centered.max())
    return centered / extent if extent > 0.0 else centered


def spring_layout(
    g: RelationGraph,
    params: Optional[EmbedParams] = None,
    init: Optional[StartLayout] = None,
) -> Layout:
    """Force-directed layout: weighted attraction along edges, repulsion between all pairs.

    With ideal length K = sqrt(area / N), an edge of weight w pulls with w·d²/K and
    every pair pushes with K²/d. Each step moves a vertex by at most the current
    temperature, which cools linearly from 0.1 to 0.
    """
    params = params or EmbedParams()
    if g.semantics == WeightSemantics.DISSIMILARITY:
        raise ConfigError("spring layout needs attraction weights (similarity or probability); "
                          "apply the 'flip' transform to distance graphs")
    if g.n_edges and g.weights.min() < 0.0:
        raise ConfigError("spring layout needs non-negative attraction weights")

    n = g.n_vertices
    rng = np.random.default_rng(params.seed)
    coords, may_rescale = start_coords(n, params, rng, init)
    if may_rescale:
        coords = _to_unit_box(coords)
    coords = jitter_coincident(coords, rng)

    iterations = params.iterations_or(cfg.SPRING_ITERATIONS)
    K = np.sqrt(cfg.SPRING_AREA / n)
    attraction = g.to_dense(fill=0.0)
    np.fill_diagonal(attraction, 0.0)
    t0 = cfg.SPRING_START_TEMPERATURE

    for it in range(iterations):
        temperature = t0 * (1.0 - it / iterations)
        dist = np.sqrt(squared_distances(coords))
        np.maximum(dist, MIN_SPRING_DISTANCE, out=dist)
        # per-pair coefficient on the difference vector: K²/d² repulsion, w·d/K attraction
        coeff = K * K / dist ** 2 - attraction * dist / K
        np.fill_diagonal(coeff, 0.0)
        disp = pairwise_force_sum(coeff, coords)

        length = np.sqrt((disp ** 2).sum(axis=1))
        capped = np.minimum(length, temperature)
        scale = np.divide(capped, length, out=np.zeros_like(length), where=length > 0.0)
        coords = coords + disp * scale[:, None]

        if it % 10 == 0:
            logger.debug("spring iteration %d: temperature %.4f, mean displacement %.4g",
                         it, temperature, float(capped.mean()))

    logger.info("Spring layout: %d vertices, %d edges, %d iterations", n, g.n_edges, iterations)
    return Layout(coords=coords)
