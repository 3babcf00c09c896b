"""Data items and their layouts in the visual space."""

from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.utils.errors import DataError


class DistanceMetric(str, Enum):
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"


def frozen_array(values, dtype=np.float64, ndim: Optional[int] = None, name: str = "values") -> np.ndarray:
    """Copy `values` into a read-only array of the requested dtype and rank."""
    try:
        arr = np.array(values, dtype=dtype, copy=True)
    except (TypeError, ValueError) as e:
        raise DataError(f"{name}: cannot convert to {np.dtype(dtype).name} array ({e})") from e
    if ndim is not None and arr.ndim != ndim:
        raise DataError(f"{name}: expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


class DataMatrix(BaseModel):
    """N×m table of data items with optional integer class labels."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    labels: Optional[np.ndarray] = None
    feature_names: Optional[List[str]] = None

    @field_validator("values", mode="before")
    @classmethod
    def _check_values(cls, v):
        arr = frozen_array(v, ndim=2, name="values")
        if arr.shape[0] < 2:
            raise DataError(f"DataMatrix needs at least 2 rows, got {arr.shape[0]}")
        if arr.shape[1] < 1:
            raise DataError("DataMatrix needs at least 1 column")
        if not np.all(np.isfinite(arr)):
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise DataError(f"Non-finite value at row {bad[0]}, column {bad[1]}")
        return arr

    @field_validator("labels", mode="before")
    @classmethod
    def _check_labels(cls, v):
        if v is None:
            return None
        return frozen_array(v, dtype=np.int64, ndim=1, name="labels")

    @model_validator(mode="after")
    def _labels_match_rows(self):
        if self.labels is not None and len(self.labels) != self.values.shape[0]:
            raise DataError(f"labels has length {len(self.labels)}, expected {self.values.shape[0]}")
        if self.feature_names is not None and len(self.feature_names) != self.values.shape[1]:
            raise DataError(f"feature_names has length {len(self.feature_names)}, expected {self.values.shape[1]}")
        return self

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def has_labels(self) -> bool:
        return self.labels is not None


class Layout(BaseModel):
    """N×dim coordinates in the visual space (dim 2 or 3)."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coords: np.ndarray

    @field_validator("coords", mode="before")
    @classmethod
    def _check_coords(cls, v):
        arr = frozen_array(v, ndim=2, name="coords")
        if arr.shape[1] not in (2, 3):
            raise DataError(f"Layout dimension must be 2 or 3, got {arr.shape[1]}")
        if not np.all(np.isfinite(arr)):
            raise DataError("Layout contains non-finite coordinates")
        return arr

    @property
    def n_points(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def distance_matrix(self) -> np.ndarray:
        """Euclidean distances d_ij between layout points."""
        from scipy.spatial.distance import pdist, squareform
        return squareform(pdist(self.coords))

    def require_points(self, n: int, source: str = "source") -> None:
        if self.n_points != n:
            raise DataError(f"Layout has {self.n_points} points but the {source} has {n}")
