"""Closed-form layouts: classical MDS and PCA projection."""

import logging

import numpy as np
import scipy.linalg

from src.core.matrix_ops import check_distance_matrix
from src.models.data_models import DataMatrix, Layout

logger = logging.getLogger(__name__)

# eigenvalues below this fraction of the largest count as zero
RANK_TOLERANCE = 1e-10


def _orient(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    if vectors.size == 0:
        return vectors
    pivots = vectors[np.argmax(np.abs(vectors), axis=0), np.arange(vectors.shape[1])]
    signs = np.where(pivots < 0.0, -1.0, 1.0)
    return vectors * signs


def classical_mds(D: np.ndarray, dim: int = 2) -> Layout:
    """Top-`dim` eigenvectors of B = -½ J D² J scaled by √eigenvalue.

    Missing positive eigenvalues become zero coordinates (with a warning).
    """
    D = check_distance_matrix(D)
    n = D.shape[0]
    sq = D ** 2
    # double centering without forming J
    B = -0.5 * (sq - sq.mean(axis=0, keepdims=True) - sq.mean(axis=1, keepdims=True) + sq.mean())
    B = (B + B.T) / 2.0

    top = min(dim, n)
    evals, evecs = scipy.linalg.eigh(B, subset_by_index=[n - top, n - 1])
    evals, evecs = evals[::-1], evecs[:, ::-1]
    scale = float(np.abs(evals).max())
    positive = evals > RANK_TOLERANCE * scale if scale > 0.0 else np.zeros(len(evals), dtype=bool)

    coords = np.zeros((n, dim))
    coords[:, np.flatnonzero(positive)] = _orient(evecs[:, positive]) * np.sqrt(evals[positive])
    if positive.sum() < dim:
        logger.warning("Classical MDS found %d positive eigenvalues for %d dimensions; padding with zeros",
                       int(positive.sum()), dim)
    return Layout(coords=coords)


def pca_init(data: DataMatrix, dim: int = 2) -> Layout:
    """Scores on the top-`dim` principal components of the mean-centered data.

    Each component's largest-magnitude loading is made positive; components beyond
    the data's column count are zero.
    """
    centered = data.values - data.values.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    top = min(dim, vt.shape[0])
    loadings = _orient(vt[:top].T)
    coords = np.zeros((data.rows, dim))
    coords[:, :top] = centered @ loadings
    logger.debug("PCA projection of %d×%d data to %d dims", data.rows, data.cols, dim)
    return Layout(coords=coords)
