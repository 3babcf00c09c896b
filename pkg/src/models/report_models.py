"""Quality reports and stage diagnostics."""

from enum import Enum
from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.data_models import Layout, frozen_array
from src.utils.errors import DataError

# Metrics whose value is a fraction; anything outside [0, 1] is a bug upstream.
UNIT_INTERVAL_METRICS = frozenset({
    "faithfulness",
    "layout_faithfulness",
    "neighborhood_preservation",
    "trustworthiness",
    "continuity",
    "neighbor_hit",
})


class QualityReport(BaseModel):
    """Named scalar metrics plus optional per-node score vectors."""
    scalars: Dict[str, float] = Field(default_factory=dict)
    per_node: Dict[str, List[float]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_ranges(self):
        for name, value in self.scalars.items():
            if name in UNIT_INTERVAL_METRICS and not (0.0 <= value <= 1.0):
                raise DataError(f"Metric {name}={value} outside [0, 1]")
        lengths = {len(v) for v in self.per_node.values()}
        if len(lengths) > 1:
            raise DataError(f"Per-node vectors disagree in length: {sorted(lengths)}")
        return self

    @property
    def n_items(self) -> int:
        for values in self.per_node.values():
            return len(values)
        return 0

    def with_scalar(self, name: str, value: float) -> "QualityReport":
        return QualityReport(scalars={**self.scalars, name: float(value)}, per_node=dict(self.per_node))

    def with_per_node(self, name: str, values) -> "QualityReport":
        return QualityReport(
            scalars=dict(self.scalars),
            per_node={**self.per_node, name: [float(v) for v in values]},
        )

    def merged(self, other: "QualityReport") -> "QualityReport":
        return QualityReport(
            scalars={**self.scalars, **other.scalars},
            per_node={**self.per_node, **other.per_node},
        )


class PerplexityCalibration(BaseModel):
    """Per-item Gaussian bandwidths found by the perplexity search."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    sigma: np.ndarray
    achieved_perplexity: np.ndarray
    target: float
    tolerance: float

    @model_validator(mode="before")
    @classmethod
    def _freeze(cls, data):
        if isinstance(data, dict):
            data = dict(data)
            data["sigma"] = frozen_array(data["sigma"], ndim=1, name="sigma")
            data["achieved_perplexity"] = frozen_array(data["achieved_perplexity"], ndim=1, name="achieved_perplexity")
        return data

    @model_validator(mode="after")
    def _check(self):
        if len(self.sigma) != len(self.achieved_perplexity):
            raise DataError("sigma and achieved_perplexity differ in length")
        if len(self.sigma) and self.sigma.min() <= 0.0:
            raise DataError("sigma must be positive")
        # tolerance is on log2-perplexity; small slack for the final float rounding
        gap = np.abs(np.log2(self.achieved_perplexity) - np.log2(self.target))
        if len(gap) and gap.max() > self.tolerance + 1e-9:
            raise DataError(f"Calibration off target by {gap.max():.3g} bits")
        return self


class ShapeGraphKind(str, Enum):
    KNN = "knn"


class ShapeGraphSpec(BaseModel):
    """Which proximity graph to induce from a layout."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: ShapeGraphKind = ShapeGraphKind.KNN
    k: int
    source: Layout

    @model_validator(mode="after")
    def _check_k(self):
        if not (1 <= self.k < self.source.n_points):
            raise DataError(f"Shape graph k={self.k} must satisfy 1 <= k < N={self.source.n_points}")
        return self


class RunReport(BaseModel):
    """Persisted record of one pipeline run."""
    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")

    config: Dict[str, Any] = Field(default_factory=dict)
    metrics: Dict[str, float] = Field(default_factory=dict)
    per_node: Dict[str, List[float]] = Field(default_factory=dict)
    timings_ms: Dict[str, float] = Field(default_factory=dict)

    @classmethod
    def from_quality(cls, config: Dict[str, Any], quality: QualityReport,
                     timings_ms: Dict[str, float]) -> "RunReport":
        return cls(config=config, metrics=dict(quality.scalars),
                   per_node=dict(quality.per_node), timings_ms=dict(timings_ms))
