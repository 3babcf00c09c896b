"""Quality-analysis stage: compute requested metrics and centrality overlays."""

import logging
from typing import Optional, Sequence

import numpy as np

from src.core.matrix_ops import matrix_from_graph
from src.graphalg.centrality import centrality
from src.models.data_models import DataMatrix, DistanceMetric, Layout
from src.models.graph_models import CentralityKind, PathCost, RelationGraph, WeightSemantics
from src.models.pipeline_models import QualityMetric
from src.models.report_models import QualityReport
from src.quality.metrics import (
    continuity,
    neighbor_hit,
    neighborhood_preservation,
    source_distances,
    stress,
    trustworthiness,
)
from src.quality.shape import faithfulness, shape_graph
from src.utils import config as cfg
from src.utils.errors import DataError

logger = logging.getLogger(__name__)


def centrality_overlay(
    g: RelationGraph,
    kind: CentralityKind,
    cost: PathCost = PathCost.HOP,
    report: Optional[QualityReport] = None,
) -> QualityReport:
    """Per-node centrality scores attached to a report under the centrality's name."""
    scores = centrality(g, kind, cost)
    return (report or QualityReport()).with_per_node(CentralityKind(kind).value, scores.values)


class QualityAnalyzer:
    """Validates a layout against its relationship graph and source data."""

    def analyze(
        self,
        g: RelationGraph,
        layout: Layout,
        metrics: Sequence[QualityMetric] = (QualityMetric.FAITHFULNESS,),
        k: int = cfg.DEFAULT_K,
        data: Optional[DataMatrix] = None,
        metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
        distances: Optional[np.ndarray] = None,
        centralities: Sequence[CentralityKind] = (),
        path_cost: PathCost = PathCost.HOP,
    ) -> QualityReport:
        layout.require_points(g.n_vertices, "graph")
        report = QualityReport()

        for name in metrics:
            name = QualityMetric(name)
            value = self._scalar(name, g, layout, k, data, metric, distances)
            logger.info("Quality %s = %.4f", name.value, value)
            report = report.with_scalar(name.value, value)

        for kind in centralities:
            report = centrality_overlay(g, kind, path_cost, report)
            logger.info("Attached %s centrality (%s cost)", CentralityKind(kind).value, PathCost(path_cost).value)
        return report

    def _scalar(
        self,
        name: QualityMetric,
        g: RelationGraph,
        layout: Layout,
        k: int,
        data: Optional[DataMatrix],
        metric: DistanceMetric,
        distances: Optional[np.ndarray],
    ) -> float:
        if name == QualityMetric.FAITHFULNESS:
            return faithfulness(g, shape_graph(layout, k))
        if name == QualityMetric.NEIGHBOR_HIT:
            return neighbor_hit(layout, data.labels if data is not None else None, k)
        if name == QualityMetric.STRESS:
            return stress(layout, self._stress_source(g, data, metric, distances))
        if name == QualityMetric.NEIGHBORHOOD_PRESERVATION:
            return neighborhood_preservation(data, layout, k, metric, distances)
        if name == QualityMetric.TRUSTWORTHINESS:
            return trustworthiness(data, layout, k, metric, distances)
        return continuity(data, layout, k, metric, distances)

    @staticmethod
    def _stress_source(
        g: RelationGraph,
        data: Optional[DataMatrix],
        metric: DistanceMetric,
        distances: Optional[np.ndarray],
    ) -> np.ndarray:
        if data is not None or distances is not None:
            return source_distances(data, metric, distances)
        # a complete distance graph carries the matrix itself
        if g.semantics == WeightSemantics.DISSIMILARITY and g.is_complete:
            return matrix_from_graph(g)
        raise DataError("stress needs the source data or a complete dissimilarity graph")
