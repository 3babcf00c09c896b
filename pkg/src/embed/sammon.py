"""Sammon mapping: gradient descent on Sammon stress with backtracking step control."""

import logging
from typing import Optional, Union

import numpy as np
from scipy.spatial.distance import pdist, squareform

from src.core.matrix_ops import check_distance_matrix, pairwise_force_sum
from src.embed.initialization import StartLayout, jitter_coincident, start_coords
from src.models.data_models import Layout
from src.models.pipeline_models import EmbedParams
from src.utils import config as cfg
from src.utils.errors import DataError

logger = logging.getLogger(__name__)


def _coords(layout: Union[Layout, np.ndarray]) -> np.ndarray:
    return layout.coords if isinstance(layout, Layout) else np.asarray(layout, dtype=np.float64)


def _pair_distances(coords: np.ndarray) -> np.ndarray:
    return squareform(pdist(coords))


def _check_sammon_input(D: np.ndarray) -> np.ndarray:
    D = check_distance_matrix(D)
    off = ~np.eye(D.shape[0], dtype=bool)
    if np.any(D[off] == 0.0):
        i, j = np.argwhere((D == 0.0) & off)[0]
        raise DataError(
            f"Sammon mapping divides by each distance, but items {i} and {j} are at distance 0; "
            "deduplicate the data or add a small jitter"
        )
    return D


def sammon_stress(layout: Union[Layout, np.ndarray], D: np.ndarray) -> float:
    """E = (1 / Σ_{i<j} ω_ij) Σ_{i<j} (ω_ij - d_ij)² / ω_ij."""
    coords = _coords(layout)
    iu = np.triu_indices(D.shape[0], k=1)
    omega = D[iu]
    d = _pair_distances(coords)[iu]
    return float(((omega - d) ** 2 / omega).sum() / omega.sum())


def sammon_gradient(layout: Union[Layout, np.ndarray], D: np.ndarray) -> np.ndarray:
    """∂E/∂y_i = (2 / Σ ω) Σ_j (d_ij - ω_ij) / (d_ij ω_ij) (y_i - y_j)."""
    coords = _coords(layout)
    n = D.shape[0]
    d = _pair_distances(coords)
    omega = np.array(D, dtype=np.float64, copy=True)
    np.fill_diagonal(omega, 1.0)
    denom = d * omega
    coeff = np.divide(d - omega, denom, out=np.zeros((n, n)), where=denom > 0.0)
    np.fill_diagonal(coeff, 0.0)
    c = D[np.triu_indices(n, k=1)].sum()
    return (2.0 / c) * pairwise_force_sum(coeff, coords)


def sammon_embed(
    D: np.ndarray,
    params: Optional[EmbedParams] = None,
    init: Optional[StartLayout] = None,
) -> Layout:
    """Minimize Sammon stress; every accepted step leaves E no larger than before."""
    params = params or EmbedParams()
    D = _check_sammon_input(D)
    n = D.shape[0]
    rng = np.random.default_rng(params.seed)
    coords, may_rescale = start_coords(n, params, rng, init)
    coords = jitter_coincident(coords, rng)
    if may_rescale:
        iu = np.triu_indices(n, k=1)
        current = _pair_distances(coords)[iu].mean()
        if current > 0.0:
            coords = (coords - coords.mean(axis=0)) * (D[iu].mean() / current)

    iterations = params.iterations_or(cfg.SAMMON_ITERATIONS)
    step = params.learning_rate_or(cfg.SAMMON_STEP)
    energy = sammon_stress(coords, D)
    start_energy = energy

    for it in range(iterations):
        grad = sammon_gradient(coords, D)
        accepted = False
        for _ in range(cfg.SAMMON_MAX_HALVINGS):
            candidate = coords - step * grad
            new_energy = sammon_stress(candidate, D)
            if new_energy <= energy:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            logger.debug("Sammon: no descent step after %d halvings at iteration %d", cfg.SAMMON_MAX_HALVINGS, it)
            break
        coords, energy = candidate, new_energy
        step *= 2.0
        if it % 50 == 0:
            logger.debug("Sammon iteration %d: stress %.6g, step %.3g", it, energy, step)

    logger.info("Sammon mapping: stress %.6g -> %.6g", start_energy, energy)
    return Layout(coords=coords)
