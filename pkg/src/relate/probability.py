"""Probabilistic relationship recipes: t-SNE neighbor probabilities and UMAP fuzzy graphs."""

import logging
from typing import Optional, Tuple

import numpy as np
import scipy.sparse

from src.core.matrix_ops import distance_matrix, nearest_neighbor_indices
from src.models.data_models import DataMatrix, DistanceMetric
from src.models.graph_models import RelationGraph, WeightSemantics
from src.models.report_models import PerplexityCalibration
from src.utils import config as cfg
from src.utils.errors import ConfigError, DataError, NumericError

logger = logging.getLogger(__name__)


def _gaussian_rows(sq_dist: np.ndarray, valid: np.ndarray, sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Row-normalized exp(-δ²/2σ²) over valid entries and the entropy of each row in bits."""
    with np.errstate(divide="ignore", over="ignore"):
        logits = np.where(valid, -sq_dist / (2.0 * sigma[:, None] ** 2), -np.inf)
    logits -= logits.max(axis=1, keepdims=True)
    weights = np.exp(logits)
    p = weights / weights.sum(axis=1, keepdims=True)
    log_p = np.zeros_like(p)
    np.log2(p, out=log_p, where=p > 0.0)
    entropy = -(p * log_p).sum(axis=1)
    return p, entropy


def _calibrate(sq_dist: np.ndarray, valid: np.ndarray, perplexity: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Geometric bisection on σ per row until log2-perplexity is within tolerance."""
    n_rows = sq_dist.shape[0]
    target = np.log2(perplexity)
    lo = np.full(n_rows, cfg.SIGMA_LOWER)
    hi = np.full(n_rows, cfg.SIGMA_UPPER)
    sigma = np.sqrt(lo * hi)
    p = np.zeros_like(sq_dist)
    entropy = np.zeros(n_rows)
    active = np.ones(n_rows, dtype=bool)

    for _ in range(cfg.PERPLEXITY_MAX_STEPS):
        idx = np.flatnonzero(active)
        if not len(idx):
            break
        p_act, h_act = _gaussian_rows(sq_dist[idx], valid[idx], sigma[idx])
        p[idx] = p_act
        entropy[idx] = h_act
        done = np.abs(h_act - target) <= cfg.PERPLEXITY_TOLERANCE
        active[idx[done]] = False

        todo = idx[~done]
        too_flat = h_act[~done] > target
        hi[todo[too_flat]] = sigma[todo[too_flat]]
        lo[todo[~too_flat]] = sigma[todo[~too_flat]]
        sigma[todo] = np.sqrt(lo[todo] * hi[todo])

    if active.any():
        bad = int(np.flatnonzero(active)[0])
        raise NumericError(
            f"Perplexity search did not converge for row {bad} after {cfg.PERPLEXITY_MAX_STEPS} steps "
            f"(achieved {2.0 ** entropy[bad]:.4g}, target {perplexity:g}); the distance row is degenerate"
        )
    return sigma, p, 2.0 ** entropy


def _check_perplexity(perplexity: float, n_candidates: int) -> None:
    if not (1.0 <= perplexity <= n_candidates):
        raise ConfigError(f"perplexity={perplexity} must lie in [1, {n_candidates}]")


def perplexity_calibrate(
    distance_row: np.ndarray,
    target_perplexity: float,
    self_index: Optional[int] = None,
) -> Tuple[float, np.ndarray]:
    """Find σ_i so that the conditional row p_{j|i} has the target perplexity.

    `self_index` marks the item's own entry, which gets probability 0; without it
    every entry is a candidate neighbor.
    """
    row = np.asarray(distance_row, dtype=np.float64).ravel()
    valid = np.ones(len(row), dtype=bool)
    if self_index is not None:
        valid[self_index] = False
    _check_perplexity(target_perplexity, int(valid.sum()))
    sigma, p, _ = _calibrate((row ** 2)[None, :], valid[None, :], target_perplexity)
    return float(sigma[0]), p[0]


def conditional_probabilities(D: np.ndarray, perplexity: float) -> Tuple[np.ndarray, PerplexityCalibration]:
    """N×N matrix of p_{j|i} (rows sum to 1, zero diagonal) with the fitted bandwidths."""
    n = D.shape[0]
    _check_perplexity(perplexity, n - 1)
    valid = ~np.eye(n, dtype=bool)
    sigma, p, achieved = _calibrate(np.asarray(D, dtype=np.float64) ** 2, valid, perplexity)
    calibration = PerplexityCalibration(
        sigma=sigma, achieved_perplexity=achieved,
        target=perplexity, tolerance=cfg.PERPLEXITY_TOLERANCE,
    )
    logger.info("Calibrated %d rows to perplexity %g (sigma median %.4g)", n, perplexity, np.median(sigma))
    return p, calibration


def tsne_probability_graph(
    data: DataMatrix,
    perplexity: float = cfg.DEFAULT_PERPLEXITY,
    prune_epsilon: float = cfg.DEFAULT_PRUNE_EPSILON,
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
    distances: Optional[np.ndarray] = None,
) -> RelationGraph:
    """Graph with w(i, j) = (p_{j|i} + p_{i|j}) / 2, dropping pairs below `prune_epsilon`.

    Exactly-zero probabilities never become edges.
    """
    if prune_epsilon < 0.0:
        raise ConfigError(f"prune_epsilon must be >= 0, got {prune_epsilon}")
    D = distance_matrix(data, metric) if distances is None else distances
    p_cond, _ = conditional_probabilities(D, perplexity)
    joint = (p_cond + p_cond.T) / 2.0

    rows, cols = np.triu_indices(D.shape[0], k=1)
    w = joint[rows, cols]
    keep = (w >= prune_epsilon) & (w > 0.0)
    g = RelationGraph(
        n_vertices=D.shape[0], rows=rows[keep], cols=cols[keep], weights=w[keep],
        semantics=WeightSemantics.PROBABILITY,
    )
    logger.info("t-SNE graph (perplexity=%g, prune=%g): kept %d of %d pairs",
                perplexity, prune_epsilon, g.n_edges, len(w))
    return g


def _umap_bandwidths(knn_dist: np.ndarray, target: float) -> Tuple[np.ndarray, np.ndarray]:
    """ρ_i (nearest non-zero distance) and σ_i with Σ_j exp(-max(0, δ_ij - ρ_i)/σ_i) = target."""
    n = knn_dist.shape[0]
    masked = np.where(knn_dist > 0.0, knn_dist, np.inf)
    rho = masked.min(axis=1)
    rho[~np.isfinite(rho)] = 0.0
    excess = np.maximum(knn_dist - rho[:, None], 0.0)

    lo = np.zeros(n)
    hi = np.full(n, np.inf)
    mid = np.ones(n)
    active = np.ones(n, dtype=bool)
    for _ in range(cfg.UMAP_SIGMA_STEPS):
        idx = np.flatnonzero(active)
        if not len(idx):
            break
        psum = np.exp(-excess[idx] / mid[idx, None]).sum(axis=1)
        done = np.abs(psum - target) < cfg.UMAP_SIGMA_TOLERANCE
        active[idx[done]] = False

        todo, psum = idx[~done], psum[~done]
        high = psum > target
        hi[todo[high]] = mid[todo[high]]
        lo[todo[~high]] = mid[todo[~high]]
        unbounded = ~np.isfinite(hi[todo])
        mid[todo] = np.where(unbounded, mid[todo] * 2.0, (lo[todo] + hi[todo]) / 2.0)

    sigma = mid
    if active.any():
        stuck = np.flatnonzero(active)
        logger.warning("UMAP bandwidth search did not converge for %d items (duplicate-heavy neighborhoods); "
                       "using mean neighbor distance", len(stuck))
        sigma[stuck] = knn_dist[stuck].mean(axis=1)

    row_mean = knn_dist.mean(axis=1)
    floor = cfg.UMAP_MIN_SIGMA_SCALE * np.where(rho > 0.0, row_mean, knn_dist.mean())
    sigma = np.maximum(sigma, floor)
    # all-duplicate neighborhoods: every membership is 1 whatever σ is
    sigma[sigma <= 0.0] = 1.0
    return rho, sigma


def fuzzy_union(a, b):
    """Probabilistic t-conorm a + b - ab, clipped into [0, 1]."""
    return np.clip(a + b - a * b, 0.0, 1.0)


def umap_fuzzy_graph(
    data: DataMatrix,
    n_neighbors: int = cfg.DEFAULT_N_NEIGHBORS,
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
    distances: Optional[np.ndarray] = None,
) -> RelationGraph:
    """Fuzzy simplicial set over each item's neighborhood, symmetrized by fuzzy union.

    `n_neighbors` counts the item itself, so each item gets n_neighbors - 1
    directed memberships with total log2(n_neighbors).
    """
    D = distance_matrix(data, metric) if distances is None else distances
    n = D.shape[0]
    if not (2 <= n_neighbors < n):
        raise ConfigError(f"n_neighbors={n_neighbors} must satisfy 2 <= n_neighbors < N={n}")

    neighbors = nearest_neighbor_indices(D, n_neighbors - 1)
    knn_dist = np.take_along_axis(D, neighbors, axis=1)
    rho, sigma = _umap_bandwidths(knn_dist, np.log2(n_neighbors))
    memberships = np.exp(-np.maximum(knn_dist - rho[:, None], 0.0) / sigma[:, None])

    directed = scipy.sparse.csr_matrix(
        (memberships.ravel(), (np.repeat(np.arange(n), n_neighbors - 1), neighbors.ravel())),
        shape=(n, n),
    )
    transpose = directed.T.tocsr()
    union = (directed + transpose - directed.multiply(transpose)).tocsr()
    union.data = np.clip(union.data, 0.0, 1.0)
    union.eliminate_zeros()

    g = RelationGraph.from_sparse(union, WeightSemantics.PROBABILITY)
    if g.n_edges == 0:
        raise DataError("UMAP graph has no edges")
    logger.info("UMAP graph (n_neighbors=%d): %d edges", n_neighbors, g.n_edges)
    return g
