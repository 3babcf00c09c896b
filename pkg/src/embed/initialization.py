"""Start layouts for iterative embedders."""

import logging
from typing import Optional, Tuple, Union

import numpy as np

from src.models.data_models import Layout
from src.models.pipeline_models import EmbedParams, InitKind
from src.utils import config as cfg
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)

StartLayout = Union[Layout, np.ndarray]


def start_coords(
    n: int,
    params: EmbedParams,
    rng: np.random.Generator,
    init: Optional[StartLayout] = None,
) -> Tuple[np.ndarray, bool]:
    """Resolve the start coordinates and whether the method may rescale them.

    An explicit `init` wins; otherwise the given layout or seeded Gaussian noise.
    Given layouts are used as-is (never rescaled), which keeps every embedder
    equivariant under translation of its start layout.
    """
    if init is None:
        if params.init == InitKind.GIVEN:
            if params.given_layout is None:
                raise ConfigError("init 'given' needs a start layout")
            init = params.given_layout
        elif params.init == InitKind.PCA:
            raise ConfigError("PCA initialization needs the data matrix; resolve it before embedding")
        else:
            init = rng.standard_normal((n, params.dim))

    coords = np.array(init.coords if isinstance(init, Layout) else init, dtype=np.float64, copy=True)
    if coords.shape != (n, params.dim):
        raise DataError(f"Start layout has shape {coords.shape}, expected ({n}, {params.dim})")
    return coords, params.init != InitKind.GIVEN


def rescale(coords: np.ndarray, spread: float) -> np.ndarray:
    """Center and scale so the largest per-axis standard deviation equals `spread`."""
    centered = coords - coords.mean(axis=0)
    std = float(centered.std(axis=0).max())
    if std == 0.0:
        return centered
    return centered * (spread / std)


def jitter_coincident(coords: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Nudge duplicated points apart by seeded noise of magnitude 1e-9."""
    _, inverse, counts = np.unique(coords, axis=0, return_inverse=True, return_counts=True)
    dup = counts[inverse.ravel()] > 1
    if not dup.any():
        return coords
    logger.warning("Jittering %d coincident start positions", int(dup.sum()))
    jittered = coords.copy()
    jittered[dup] += rng.standard_normal((int(dup.sum()), coords.shape[1])) * cfg.COINCIDENT_JITTER
    return jittered
