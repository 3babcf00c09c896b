"""Edge-sampling layout with negative sampling (UMAP-style stochastic optimization)."""

import logging
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import curve_fit

from src.embed.initialization import StartLayout, jitter_coincident, start_coords
from src.models.data_models import Layout
from src.models.graph_models import RelationGraph, WeightSemantics
from src.models.pipeline_models import EmbedParams
from src.utils import config as cfg
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def find_ab_params(spread: float, min_dist: float) -> Tuple[float, float]:
    """Fit 1 / (1 + a x^(2b)) to an offset exponential decay with the given spread."""

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2 * b))

    xv = np.linspace(0, spread * 3, 300)
    yv = np.zeros(xv.shape)
    yv[xv < min_dist] = 1.0
    yv[xv >= min_dist] = np.exp(-(xv[xv >= min_dist] - min_dist) / spread)
    params, _ = curve_fit(curve, xv, yv)
    return float(params[0]), float(params[1])


def make_epochs_per_sample(weights: np.ndarray, n_epochs: int) -> np.ndarray:
    """Epochs between samples of each edge; the heaviest edge is sampled every epoch."""
    result = -1.0 * np.ones(weights.shape[0], dtype=np.float64)
    n_samples = n_epochs * (weights / weights.max())
    result[n_samples > 0] = float(n_epochs) / n_samples[n_samples > 0]
    return result


def _scale_to_extent(coords: np.ndarray, extent: float) -> np.ndarray:
    span = coords.max(axis=0) - coords.min(axis=0)
    span[span == 0.0] = 1.0
    return extent * (coords - coords.min(axis=0)) / span


def negative_sampling_embed(
    g: RelationGraph,
    params: Optional[EmbedParams] = None,
    init: Optional[StartLayout] = None,
) -> Layout:
    """Attract endpoints of sampled edges, repel them from sampled non-neighbors.

    Each edge (in both directions) is visited at a rate proportional to its weight.
    Every visit applies `negative_samples` repulsive updates against vertices drawn
    uniformly at random, skipping the vertex itself and its graph neighbors. The
    step size decays linearly to 0 over the epochs. All updates of one epoch are
    computed from the positions at the start of that epoch.
    """
    params = params or EmbedParams()
    if g.semantics == WeightSemantics.DISSIMILARITY:
        raise ConfigError("negative sampling needs probability or similarity weights, got dissimilarities")
    if g.n_edges == 0 or g.weights.max() <= 0.0:
        raise DataError("negative sampling needs at least one positively weighted edge")
    if g.weights.min() < 0.0:
        raise DataError("negative sampling needs non-negative weights")

    n = g.n_vertices
    rng = np.random.default_rng(params.seed)
    coords, may_rescale = start_coords(n, params, rng, init)
    if may_rescale:
        coords = _scale_to_extent(coords, cfg.NEGATIVE_SAMPLING_INIT_EXTENT)
    coords = jitter_coincident(coords, rng)

    a, b = find_ab_params(params.spread, params.min_dist)
    n_epochs = params.iterations_or(cfg.NEGATIVE_SAMPLING_EPOCHS)
    initial_alpha = params.learning_rate_or(cfg.NEGATIVE_SAMPLING_LEARNING_RATE)
    clip = cfg.GRADIENT_CLIP
    n_neg = params.negative_samples

    head = np.concatenate([g.rows, g.cols])
    tail = np.concatenate([g.cols, g.rows])
    weights = np.concatenate([g.weights, g.weights])
    edge_keys = np.sort(g.edge_keys())

    epochs_per_sample = make_epochs_per_sample(weights, n_epochs)
    sampled = epochs_per_sample > 0
    head, tail, epochs_per_sample = head[sampled], tail[sampled], epochs_per_sample[sampled]
    next_sample = epochs_per_sample.copy()
    if n_neg > 0:
        epochs_per_negative = epochs_per_sample / n_neg
        next_negative = epochs_per_negative.copy()

    for epoch in range(n_epochs):
        alpha = initial_alpha * (1.0 - epoch / n_epochs)
        due = np.flatnonzero(next_sample <= epoch)
        if not len(due):
            continue
        moves = np.zeros_like(coords)

        i, j = head[due], tail[due]
        diff = coords[i] - coords[j]
        dist2 = (diff ** 2).sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            attract = -2.0 * a * b * dist2 ** (b - 1.0) / (a * dist2 ** b + 1.0)
        attract = np.where(dist2 > 0.0, attract, 0.0)
        step = np.clip(attract[:, None] * diff, -clip, clip) * alpha
        np.add.at(moves, i, step)
        np.add.at(moves, j, -step)
        next_sample[due] += epochs_per_sample[due]

        if n_neg > 0:
            counts = ((epoch - next_negative[due]) / epochs_per_negative[due]).astype(np.int64)
            counts = np.maximum(counts, 0)
            src = np.repeat(i, counts)
            neg = rng.integers(0, n, size=len(src))
            lo, hi = np.minimum(src, neg), np.maximum(src, neg)
            keys = lo * n + hi
            pos = np.clip(np.searchsorted(edge_keys, keys), 0, max(len(edge_keys) - 1, 0))
            is_neighbor = edge_keys[pos] == keys
            keep = (src != neg) & ~is_neighbor
            src, neg = src[keep], neg[keep]

            d = coords[src] - coords[neg]
            d2 = (d ** 2).sum(axis=1)
            repel = 2.0 * b / ((0.001 + d2) * (a * d2 ** b + 1.0))
            grad = np.where(d2[:, None] > 0.0, np.clip(repel[:, None] * d, -clip, clip), clip)
            np.add.at(moves, src, grad * alpha)
            next_negative[due] += counts * epochs_per_negative[due]

        coords = coords + moves
        if epoch % 50 == 0:
            logger.debug("negative sampling epoch %d: %d edge samples, alpha %.3f", epoch, len(due), alpha)

    logger.info("Negative-sampling layout: %d vertices, %d epochs, %d negatives per sample", n, n_epochs, n_neg)
    return Layout(coords=coords)
