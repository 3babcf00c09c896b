"""SNE and t-SNE layouts of probability graphs.

P is the graph's weight matrix renormalized to sum to 1 over ordered pairs
(i, j), i != j. Q uses a Gaussian kernel for SNE and a Student-t kernel for
t-SNE, normalized the same way. Both minimize KL(P ‖ Q).
"""

import logging
from typing import Callable, Optional, Union

import numpy as np
import scipy.sparse

from src.core.matrix_ops import pairwise_force_sum, squared_distances
from src.embed.barnes_hut import barnes_hut_terms
from src.embed.initialization import StartLayout, jitter_coincident, rescale, start_coords
from src.models.data_models import Layout
from src.models.graph_models import RelationGraph, WeightSemantics
from src.models.pipeline_models import EmbedParams, RepulsionKind
from src.utils import config as cfg
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)

TINY = np.finfo(np.float64).tiny


def joint_probabilities(g: RelationGraph) -> np.ndarray:
    """Dense symmetric P with zero diagonal and Σ_{i≠j} p_ij = 1."""
    if g.semantics == WeightSemantics.DISSIMILARITY:
        raise ConfigError("neighbor embedding needs probability or similarity weights, got dissimilarities")
    if g.n_edges and g.weights.min() < 0.0:
        raise DataError("neighbor embedding needs non-negative weights")
    P = g.to_dense(fill=0.0)
    np.fill_diagonal(P, 0.0)
    total = P.sum()
    if total <= 0.0:
        raise DataError("graph has no positive weight to embed")
    return P / total


def _coords(layout: Union[Layout, np.ndarray]) -> np.ndarray:
    return layout.coords if isinstance(layout, Layout) else np.asarray(layout, dtype=np.float64)


def gaussian_q(coords: np.ndarray) -> np.ndarray:
    sq = squared_distances(coords)
    off = ~np.eye(len(sq), dtype=bool)
    # shifting by the smallest distance leaves Q unchanged and avoids underflow
    kernel = np.exp(-(sq - sq[off].min()))
    np.fill_diagonal(kernel, 0.0)
    return kernel / kernel.sum()


def student_t_q(coords: np.ndarray) -> np.ndarray:
    kernel = 1.0 / (1.0 + squared_distances(coords))
    np.fill_diagonal(kernel, 0.0)
    return kernel / kernel.sum()


def kl_divergence(P: np.ndarray, Q: np.ndarray) -> float:
    """Σ_{p_ij > 0} p_ij log(p_ij / q_ij)."""
    mask = P > 0.0
    return float((P[mask] * np.log(P[mask] / np.maximum(Q[mask], TINY))).sum())


def sne_objective(layout: Union[Layout, np.ndarray], P: np.ndarray) -> float:
    return kl_divergence(P, gaussian_q(_coords(layout)))


def tsne_objective(layout: Union[Layout, np.ndarray], P: np.ndarray) -> float:
    return kl_divergence(P, student_t_q(_coords(layout)))


def sne_gradient(layout: Union[Layout, np.ndarray], P: np.ndarray) -> np.ndarray:
    """4 Σ_j (p_ij - q_ij)(y_i - y_j) with Gaussian q."""
    coords = _coords(layout)
    return 4.0 * pairwise_force_sum(P - gaussian_q(coords), coords)


def tsne_gradient(layout: Union[Layout, np.ndarray], P: np.ndarray) -> np.ndarray:
    """4 Σ_j (p_ij - q_ij)(y_i - y_j)(1 + ‖y_i - y_j‖²)⁻¹."""
    coords = _coords(layout)
    kernel = 1.0 / (1.0 + squared_distances(coords))
    np.fill_diagonal(kernel, 0.0)
    Q = kernel / kernel.sum()
    return 4.0 * pairwise_force_sum((P - Q) * kernel, coords)


def tsne_gradient_barnes_hut(coords: np.ndarray, P_sparse: scipy.sparse.csr_matrix, theta: float) -> np.ndarray:
    """t-SNE gradient with attraction over the edges and tree-approximated repulsion."""
    coo = P_sparse.tocoo()
    d = coords[coo.row] - coords[coo.col]
    w = coo.data / (1.0 + (d ** 2).sum(axis=1))
    attraction = np.zeros_like(coords)
    np.add.at(attraction, coo.row, w[:, None] * d)
    repulsion, z = barnes_hut_terms(coords, theta)
    return 4.0 * (attraction - repulsion / z)


GradientFn = Callable[[np.ndarray, float], np.ndarray]


def auto_learning_rate(n_points: int, exaggeration: float) -> float:
    return max(n_points / exaggeration / 4.0, cfg.NEIGHBOR_EMBED_MIN_LEARNING_RATE)


def clip_steps(update: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """Shorten any per-point step longer than MAX_STEP_FRACTION of the layout's RMS radius."""
    radius = np.sqrt(((coords - coords.mean(axis=0)) ** 2).sum(axis=1).mean())
    limit = cfg.MAX_STEP_FRACTION * radius
    norms = np.linalg.norm(update, axis=1, keepdims=True)
    return update * np.minimum(1.0, limit / np.maximum(norms, TINY))


def _gradient_descent(coords: np.ndarray, gradient: GradientFn, params: EmbedParams, label: str) -> np.ndarray:
    """Momentum gradient descent with per-coordinate gains and early exaggeration.

    `gradient(coords, exaggeration)` returns the gradient with P multiplied by the
    exaggeration factor. No point moves further in one step than half the
    layout's RMS radius, so two strongly attracted points cannot jump past each other.
    """
    iterations = params.iterations_or(cfg.NEIGHBOR_EMBED_ITERATIONS)
    learning_rate = params.learning_rate_or(auto_learning_rate(len(coords), params.exaggeration_factor))
    update = np.zeros_like(coords)
    gains = np.ones_like(coords)

    for it in range(iterations):
        exaggeration = params.exaggeration_factor if it < params.exaggeration_iterations else 1.0
        momentum = cfg.MOMENTUM_START if it < cfg.MOMENTUM_SWITCH_ITERATION else cfg.MOMENTUM_FINAL
        grad = gradient(coords, exaggeration)

        inc = update * grad < 0.0
        gains = np.where(inc, gains + 0.2, gains * 0.8)
        np.clip(gains, cfg.MIN_GAIN, None, out=gains)
        update = clip_steps(momentum * update - learning_rate * gains * grad, coords)
        coords = coords + update

        if it % 100 == 0:
            logger.debug("%s iteration %d: |grad| %.4g, exaggeration %g", label, it, float(np.linalg.norm(grad)), exaggeration)
    return coords


def _prepare(g: RelationGraph, params: EmbedParams, init: Optional[StartLayout]) -> np.ndarray:
    rng = np.random.default_rng(params.seed)
    coords, may_rescale = start_coords(g.n_vertices, params, rng, init)
    if may_rescale:
        coords = rescale(coords, cfg.INIT_SCALE)
    return jitter_coincident(coords, rng)


def sne_embed(
    g: RelationGraph,
    params: Optional[EmbedParams] = None,
    init: Optional[StartLayout] = None,
) -> Layout:
    """Symmetric SNE with Gaussian output kernel (exact gradients only)."""
    params = params or EmbedParams()
    if params.repulsion == RepulsionKind.BARNES_HUT:
        raise ConfigError("Barnes–Hut repulsion applies to the Student-t kernel; use method 'tsne'")
    P = joint_probabilities(g)
    coords = _prepare(g, params, init)
    coords = _gradient_descent(coords, lambda y, ex: sne_gradient(y, P * ex), params, "SNE")
    logger.info("SNE layout: %d points, KL %.4f", g.n_vertices, sne_objective(coords, P))
    return Layout(coords=coords)


def tsne_embed(
    g: RelationGraph,
    params: Optional[EmbedParams] = None,
    init: Optional[StartLayout] = None,
) -> Layout:
    """t-SNE with Student-t output kernel; exact or Barnes–Hut repulsion."""
    params = params or EmbedParams()
    P = joint_probabilities(g)
    coords = _prepare(g, params, init)

    if params.repulsion == RepulsionKind.BARNES_HUT:
        P_sparse = scipy.sparse.csr_matrix(P)
        gradient = lambda y, ex: tsne_gradient_barnes_hut(y, P_sparse * ex, params.theta)  # noqa: E731
    else:
        gradient = lambda y, ex: tsne_gradient(y, P * ex)  # noqa: E731

    coords = _gradient_descent(coords, gradient, params, "t-SNE")
    logger.info("t-SNE layout: %d points, KL %.4f (%s repulsion)",
                g.n_vertices, tsne_objective(coords, P), params.repulsion.value)
    return Layout(coords=coords)
