"""Relationship stage: build a graph with one recipe, then apply transforms in order."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.matrix_ops import distance_matrix
from src.models.data_models import DataMatrix, DistanceMetric
from src.models.graph_models import RelationGraph
from src.models.pipeline_models import GraphTransform, RelateRecipe, RelateSection
from src.relate.neighbors import knn_graph, pairwise_distance_graph, snn_reweight
from src.relate.probability import tsne_probability_graph, umap_fuzzy_graph
from src.relate.transforms.geodesic import geodesic_complete_graph
from src.relate.transforms.mst_backbone import backbone_strengthen, mst_backbone
from src.relate.transforms.similarity_flip import similarity_flip
from src.utils import config as cfg

logger = logging.getLogger(__name__)


@dataclass
class RelateStep:
    """Graph summary after one recipe or transform."""
    name: str
    edges: int
    mean_degree: float
    min_weight: float
    max_weight: float
    semantics: str


@dataclass
class RelateReport:
    """Report of a relationship-modeling run."""
    recipe: str = ""
    n_vertices: int = 0
    steps: List[RelateStep] = field(default_factory=list)

    @property
    def final(self) -> Optional[RelateStep]:
        return self.steps[-1] if self.steps else None

    def as_dict(self) -> Dict[str, object]:
        return {
            "recipe": self.recipe,
            "n_vertices": self.n_vertices,
            "steps": [vars(s) for s in self.steps],
        }


def _summarize(name: str, g: RelationGraph) -> RelateStep:
    has_edges = g.n_edges > 0
    return RelateStep(
        name=name,
        edges=g.n_edges,
        mean_degree=2.0 * g.n_edges / g.n_vertices,
        min_weight=float(g.weights.min()) if has_edges else 0.0,
        max_weight=float(g.weights.max()) if has_edges else 0.0,
        semantics=g.semantics.value,
    )


class RelationshipEngine:
    """Builds relationship graphs from data using a recipe and composable transforms."""

    def build(
        self,
        data: DataMatrix,
        section: Optional[RelateSection] = None,
        metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
        distances: Optional[np.ndarray] = None,
    ) -> Tuple[RelationGraph, RelateReport]:
        """Run the recipe, then every transform, and report each step."""
        section = section or RelateSection()
        report = RelateReport(recipe=section.recipe.value, n_vertices=data.rows)
        if distances is None:
            distances = distance_matrix(data, metric)

        logger.info("Modeling relationships: recipe=%s, %d items, transforms=%s",
                    section.recipe.value, data.rows, [t.value for t in section.transforms] or "none")

        g = self._recipe(data, section, metric, distances)
        report.steps.append(_summarize(section.recipe.value, g))

        g = self.apply_transforms(g, section.transforms, section.strengthen_factor, report)

        final = report.final
        logger.info("Relationship graph ready: %d edges, mean degree %.2f, semantics %s",
                    final.edges, final.mean_degree, final.semantics)
        return g, report

    def _recipe(self, data: DataMatrix, section: RelateSection, metric: DistanceMetric,
                distances: np.ndarray) -> RelationGraph:
        recipe = section.recipe
        if recipe == RelateRecipe.COMPLETE:
            return pairwise_distance_graph(data, metric, distances=distances)
        if recipe == RelateRecipe.KNN:
            return knn_graph(data, section.k, metric, distances=distances)
        if recipe == RelateRecipe.SNN:
            return snn_reweight(data, section.k, metric, distances=distances)
        if recipe == RelateRecipe.TSNE:
            return tsne_probability_graph(data, section.perplexity, section.prune_epsilon, metric, distances=distances)
        return umap_fuzzy_graph(data, section.n_neighbors, metric, distances=distances)

    def apply_transforms(
        self,
        g: RelationGraph,
        transforms: Sequence[GraphTransform],
        strengthen_factor: float = cfg.DEFAULT_STRENGTHEN_FACTOR,
        report: Optional[RelateReport] = None,
    ) -> RelationGraph:
        for transform in transforms:
            transform = GraphTransform(transform)
            if transform == GraphTransform.FLIP:
                g = similarity_flip(g)
            elif transform == GraphTransform.GEODESIC:
                g = geodesic_complete_graph(g)
            elif transform == GraphTransform.MST_BACKBONE:
                g = mst_backbone(g)
            else:
                g = backbone_strengthen(g, mst_backbone(g), strengthen_factor)
            if report is not None:
                report.steps.append(_summarize(transform.value, g))
        return g
