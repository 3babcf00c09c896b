"""Digits experiment suite: relationship and mapping faithfulness plus closeness views.

Runs global layouts (classical MDS, spring on the flipped complete graph), local
layouts (spring on the flipped k-NN graph and on the SNN graph), compares the
t-SNE, UMAP and k-NN relationship graphs, and checks how well t-SNE and
negative-sampling embeddings preserve their own graphs against spring layouts of
the same graphs.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from src.core.matrix_ops import distance_matrix
from src.embed.embed_engine import EmbeddingEngine
from src.graphalg.centrality import closeness_centrality
from src.models.data_models import DataMatrix, Layout
from src.models.graph_models import PathCost, RelationGraph
from src.models.pipeline_models import EmbedMethod, EmbedParams, GraphTransform, InitKind, RelateRecipe, RelateSection
from src.quality.metrics import neighbor_hit_per_point, stress
from src.quality.shape import faithfulness, layout_faithfulness, shape_graph
from src.relate.relate_engine import RelationshipEngine
from src.render.svg_renderer import render_svg
from src.storage.atomic import atomic_write_text
from src.storage.layout_io import write_layout
from src.utils import config as cfg

logger = logging.getLogger(__name__)

# a label group counts as well separated when its mean neighbor hit reaches this
SEPARATED_NEIGHBOR_HIT = 0.95


@dataclass
class ExperimentRow:
    """One measured quantity of the suite."""
    group: str
    name: str
    value: float


@dataclass
class ExperimentResults:
    rows: List[ExperimentRow] = field(default_factory=list)
    per_label: Dict[str, Dict[str, float]] = field(default_factory=dict)
    per_label_umap: Dict[str, Dict[str, float]] = field(default_factory=dict)
    artifacts: Dict[str, str] = field(default_factory=dict)

    def add(self, group: str, name: str, value: float) -> None:
        self.rows.append(ExperimentRow(group, name, float(value)))
        logger.info("%s / %s = %.4f", group, name, value)

    def value(self, name: str) -> float:
        for row in self.rows:
            if row.name == name:
                return row.value
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "rows": [asdict(r) for r in self.rows],
            "per_label": self.per_label,
            "per_label_umap": self.per_label_umap,
            "artifacts": self.artifacts,
        }


@dataclass
class ExperimentSettings:
    k: int = cfg.DEFAULT_K
    perplexity: float = cfg.DEFAULT_PERPLEXITY
    n_neighbors: int = cfg.DEFAULT_N_NEIGHBORS
    prune_epsilon: float = cfg.DEFAULT_PRUNE_EPSILON
    seed: int = cfg.DEFAULT_SEED
    tsne_iterations: Optional[int] = None
    negative_sampling_epochs: Optional[int] = None
    spring_iterations: Optional[int] = None


class ExperimentSuite:
    """Runs the full set of layouts and comparisons on one labelled dataset."""

    def __init__(self, settings: Optional[ExperimentSettings] = None):
        self.settings = settings or ExperimentSettings()
        self.relate = RelationshipEngine()
        self.embedder = EmbeddingEngine()

    def _graph(self, data: DataMatrix, D: np.ndarray, recipe: RelateRecipe,
               transforms: Optional[List[GraphTransform]] = None) -> RelationGraph:
        s = self.settings
        section = RelateSection(recipe=recipe, k=s.k, perplexity=s.perplexity, n_neighbors=s.n_neighbors,
                                prune_epsilon=s.prune_epsilon, transforms=transforms or [])
        graph, _ = self.relate.build(data, section, distances=D)
        return graph

    def _embed(self, g: RelationGraph, method: EmbedMethod, data: DataMatrix,
               iterations: Optional[int] = None) -> Layout:
        params = EmbedParams(seed=self.settings.seed, init=InitKind.PCA, iterations=iterations)
        layout, _ = self.embedder.embed(g, method, params, data)
        return layout

    def run(self, data: DataMatrix, out_dir: Path) -> ExperimentResults:
        s = self.settings
        k = s.k
        results = ExperimentResults()
        D = distance_matrix(data)
        logger.info("Experiment suite on %d items x %d features (k=%d, seed=%d)", data.rows, data.cols, k, s.seed)

        # relationship graphs
        knn = self._graph(data, D, RelateRecipe.KNN)
        tsne_graph = self._graph(data, D, RelateRecipe.TSNE)
        umap_graph = self._graph(data, D, RelateRecipe.UMAP)
        results.add("relationships", "tsne_vs_umap", faithfulness(tsne_graph, umap_graph))
        results.add("relationships", "umap_vs_knn", faithfulness(umap_graph, knn))
        results.add("relationships", "tsne_vs_knn", faithfulness(tsne_graph, knn))

        # global layouts
        complete = self._graph(data, D, RelateRecipe.COMPLETE)
        mds = self._embed(complete, EmbedMethod.MDS, data)
        spring_complete = self._embed(self.relate.apply_transforms(complete, [GraphTransform.FLIP]),
                                      EmbedMethod.SPRING, data, s.spring_iterations)
        results.add("global", "mds_stress", stress(mds, D))
        results.add("global", "mds_faithfulness", faithfulness(knn, shape_graph(mds, k)))
        results.add("global", "spring_complete_faithfulness", faithfulness(knn, shape_graph(spring_complete, k)))

        # local layouts
        spring_knn = self._embed(self.relate.apply_transforms(knn, [GraphTransform.FLIP]),
                                 EmbedMethod.SPRING, data, s.spring_iterations)
        snn = self._graph(data, D, RelateRecipe.SNN)
        spring_snn = self._embed(snn, EmbedMethod.SPRING, data, s.spring_iterations)
        results.add("local", "spring_knn_faithfulness", faithfulness(knn, shape_graph(spring_knn, k)))
        results.add("local", "spring_snn_faithfulness", faithfulness(knn, shape_graph(spring_snn, k)))

        # mapping faithfulness: each graph against its own embeddings
        tsne_layout = self._embed(tsne_graph, EmbedMethod.TSNE, data, s.tsne_iterations)
        spring_tsne = self._embed(tsne_graph, EmbedMethod.SPRING, data, s.spring_iterations)
        umap_layout = self._embed(umap_graph, EmbedMethod.NEGATIVE_SAMPLING, data, s.negative_sampling_epochs)
        spring_umap = self._embed(umap_graph, EmbedMethod.SPRING, data, s.spring_iterations)
        results.add("mapping", "tsne_embed", faithfulness(tsne_graph, shape_graph(tsne_layout, k)))
        results.add("mapping", "tsne_graph_spring", faithfulness(tsne_graph, shape_graph(spring_tsne, k)))
        results.add("mapping", "negative_sampling_embed", faithfulness(umap_graph, shape_graph(umap_layout, k)))
        results.add("mapping", "umap_graph_spring", faithfulness(umap_graph, shape_graph(spring_umap, k)))
        results.add("layouts", "tsne_vs_negative_sampling", layout_faithfulness(tsne_layout, umap_layout, k))

        # closeness of both probability graphs, per label group against the matching embedding
        closeness = closeness_centrality(tsne_graph, PathCost.HOP).values
        umap_closeness = closeness_centrality(umap_graph, PathCost.HOP).values
        if data.has_labels:
            results.per_label = self._per_label(data.labels, closeness, neighbor_hit_per_point(tsne_layout, data.labels, k))
            results.per_label_umap = self._per_label(data.labels, umap_closeness,
                                                     neighbor_hit_per_point(umap_layout, data.labels, k))
            separated = [v["closeness"] for v in results.per_label.values()
                         if v["neighbor_hit"] >= SEPARATED_NEIGHBOR_HIT]
            mixed = [v["closeness"] for v in results.per_label.values()
                     if v["neighbor_hit"] < SEPARATED_NEIGHBOR_HIT]
            if separated and mixed:
                results.add("closeness", "separated_groups_mean", float(np.mean(separated)))
                results.add("closeness", "mixed_groups_mean", float(np.mean(mixed)))

        layouts = {"mds": mds, "spring_complete": spring_complete, "spring_knn": spring_knn,
                   "spring_snn": spring_snn, "tsne": tsne_layout, "negative_sampling": umap_layout,
                   "spring_tsne_graph": spring_tsne, "spring_umap_graph": spring_umap}
        for name, layout in layouts.items():
            results.artifacts[f"{name}_layout"] = str(write_layout(layout, out_dir / f"{name}.csv"))
            results.artifacts[f"{name}_svg"] = str(render_svg(layout, out_dir / f"{name}.svg",
                                                              labels=data.labels, title=name))
        closeness_views = {
            "tsne_closeness": (tsne_layout, closeness, "t-SNE layout, closeness of the t-SNE graph"),
            "tsne_graph_spring_closeness": (spring_tsne, closeness, "spring layout, closeness of the t-SNE graph"),
            "umap_closeness": (umap_layout, umap_closeness, "negative-sampling layout, closeness of the UMAP graph"),
            "umap_graph_spring_closeness": (spring_umap, umap_closeness, "spring layout, closeness of the UMAP graph"),
        }
        for name, (layout, scores, title) in closeness_views.items():
            results.artifacts[f"{name}_svg"] = str(render_svg(layout, out_dir / f"{name}.svg", scores=scores,
                                                              title=title, score_name="closeness"))

        path = out_dir / "experiments.json"
        atomic_write_text(path, json.dumps(results.as_dict(), indent=2) + "\n")
        results.artifacts["results"] = str(path)
        logger.info("Experiment results written to %s", path)
        return results

    @staticmethod
    def _per_label(labels: np.ndarray, closeness: np.ndarray, hits: np.ndarray) -> Dict[str, Dict[str, float]]:
        table = {}
        for label in np.unique(labels).tolist():
            mask = labels == label
            table[str(label)] = {
                "count": float(mask.sum()),
                "closeness": float(closeness[mask].mean()),
                "neighbor_hit": float(hits[mask].mean()),
            }
        return table
