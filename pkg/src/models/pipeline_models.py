"""Declarative run configuration: relate → embed → quality."""

from enum import Enum
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.data_models import DistanceMetric, Layout
from src.models.graph_models import CentralityKind, PathCost
from src.utils import config as cfg


class RelateRecipe(str, Enum):
    COMPLETE = "complete"
    KNN = "knn"
    SNN = "snn"
    TSNE = "tsne"
    UMAP = "umap"


class GraphTransform(str, Enum):
    FLIP = "flip"
    GEODESIC = "geodesic"
    MST_BACKBONE = "mst_backbone"
    MST_STRENGTHEN = "mst_strengthen"


class EmbedMethod(str, Enum):
    NONE = "none"
    PCA = "pca"
    MDS = "mds"
    SPRING = "spring"
    SAMMON = "sammon"
    SNE = "sne"
    TSNE = "tsne"
    NEGATIVE_SAMPLING = "negative_sampling"


class InitKind(str, Enum):
    RANDOM = "random"
    PCA = "pca"
    GIVEN = "given"


class RepulsionKind(str, Enum):
    EXACT = "exact"
    BARNES_HUT = "barnes_hut"


class QualityMetric(str, Enum):
    FAITHFULNESS = "faithfulness"
    STRESS = "stress"
    NEIGHBORHOOD_PRESERVATION = "neighborhood_preservation"
    TRUSTWORTHINESS = "trustworthiness"
    CONTINUITY = "continuity"
    NEIGHBOR_HIT = "neighbor_hit"


class ColorBy(str, Enum):
    LABELS = "labels"
    CLOSENESS = "closeness"
    BETWEENNESS = "betweenness"
    NONE = "none"


class EmbedParams(BaseModel):
    """Mapping-stage parameters. `None` iterations/learning rate mean the method default."""
    model_config = ConfigDict(frozen=True)

    dim: int = Field(2, ge=2, le=3)
    iterations: Optional[int] = Field(None, ge=1)
    learning_rate: Optional[float] = Field(None, gt=0.0)
    seed: int = Field(cfg.DEFAULT_SEED, ge=0, lt=2 ** 64)
    init: InitKind = InitKind.RANDOM
    given_layout: Optional[Layout] = None
    exaggeration_factor: float = Field(cfg.EXAGGERATION_FACTOR, ge=1.0)
    exaggeration_iterations: int = Field(cfg.EXAGGERATION_ITERATIONS, ge=0)
    negative_samples: int = Field(cfg.NEGATIVE_SAMPLES, ge=0)
    repulsion: RepulsionKind = RepulsionKind.EXACT
    theta: float = Field(cfg.BARNES_HUT_THETA, gt=0.0, le=1.0)
    min_dist: float = Field(cfg.MIN_DIST, ge=0.0)
    spread: float = Field(cfg.SPREAD, gt=0.0)

    @model_validator(mode="after")
    def _given_layout_dim(self):
        if self.given_layout is not None and self.given_layout.dim != self.dim:
            raise ValueError(f"given_layout has dim {self.given_layout.dim}, expected {self.dim}")
        return self

    def iterations_or(self, default: int) -> int:
        return self.iterations if self.iterations is not None else default

    def learning_rate_or(self, default: float) -> float:
        return self.learning_rate if self.learning_rate is not None else default


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class InputSection(_Section):
    path: Path
    has_header: bool = True
    label_column: Optional[Union[int, str]] = None
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN


class RelateSection(_Section):
    recipe: RelateRecipe = RelateRecipe.KNN
    k: int = Field(cfg.DEFAULT_K, ge=1)
    perplexity: float = Field(cfg.DEFAULT_PERPLEXITY, ge=1.0)
    n_neighbors: int = Field(cfg.DEFAULT_N_NEIGHBORS, ge=2)
    prune_epsilon: float = Field(cfg.DEFAULT_PRUNE_EPSILON, ge=0.0)
    transforms: List[GraphTransform] = Field(default_factory=list)
    strengthen_factor: float = Field(cfg.DEFAULT_STRENGTHEN_FACTOR, gt=0.0)


class EmbedSection(_Section):
    method: EmbedMethod = EmbedMethod.SPRING
    dim: int = Field(2, ge=2, le=3)
    iterations: Optional[int] = Field(None, ge=1)
    learning_rate: Optional[float] = Field(None, gt=0.0)
    init: InitKind = InitKind.PCA
    init_layout: Optional[Path] = None
    exaggeration_factor: float = Field(cfg.EXAGGERATION_FACTOR, ge=1.0)
    exaggeration_iterations: int = Field(cfg.EXAGGERATION_ITERATIONS, ge=0)
    negative_samples: int = Field(cfg.NEGATIVE_SAMPLES, ge=0)
    repulsion: RepulsionKind = RepulsionKind.EXACT
    theta: float = Field(cfg.BARNES_HUT_THETA, gt=0.0, le=1.0)
    min_dist: float = Field(cfg.MIN_DIST, ge=0.0)
    spread: float = Field(cfg.SPREAD, gt=0.0)

    def to_params(self, seed: int, given_layout: Optional[Layout] = None) -> EmbedParams:
        fields = self.model_dump(exclude={"method", "init_layout"})
        return EmbedParams(**fields, seed=seed, given_layout=given_layout)


class QualitySection(_Section):
    metrics: List[QualityMetric] = Field(default_factory=lambda: [QualityMetric.FAITHFULNESS])
    k: Optional[int] = Field(None, ge=1)  # defaults to relate.k / n_neighbors
    centrality: List[CentralityKind] = Field(default_factory=list)
    path_cost: PathCost = PathCost.HOP


class OutputSection(_Section):
    directory: Path = Path("out")
    graph: str = "graph.tsv"
    layout: str = "layout.csv"
    report: str = "report.json"
    svg: Optional[str] = "layout.svg"
    color_by: ColorBy = ColorBy.LABELS


class PipelineConfig(_Section):
    seed: int = Field(cfg.DEFAULT_SEED, ge=0, lt=2 ** 64)
    input: InputSection
    relate: RelateSection = Field(default_factory=RelateSection)
    embed: EmbedSection = Field(default_factory=EmbedSection)
    quality: QualitySection = Field(default_factory=QualitySection)
    output: OutputSection = Field(default_factory=OutputSection)

    @model_validator(mode="after")
    def _color_needs_centrality(self):
        wanted = {ColorBy.CLOSENESS: CentralityKind.CLOSENESS, ColorBy.BETWEENNESS: CentralityKind.BETWEENNESS}
        kind = wanted.get(self.output.color_by)
        if kind is not None and kind not in self.quality.centrality:
            raise ValueError(f"output.color_by={self.output.color_by.value} requires '{kind.value}' in quality.centrality")
        if self.embed.init == InitKind.GIVEN and self.embed.init_layout is None and self.embed.method != EmbedMethod.NONE:
            raise ValueError("embed.init='given' requires embed.init_layout (only method='none' may reuse the input columns)")
        return self

    @property
    def shape_k(self) -> int:
        """Shape-graph k: explicit, else the neighbor count of the modeled relationships."""
        if self.quality.k is not None:
            return self.quality.k
        if self.relate.recipe == RelateRecipe.UMAP:
            return self.relate.n_neighbors
        return self.relate.k

    def resolve_paths(self, base: Path) -> "PipelineConfig":
        def _abs(p: Optional[Path]) -> Optional[Path]:
            if p is None or p.is_absolute():
                return p
            return (base / p).resolve()

        return self.model_copy(update={
            "input": self.input.model_copy(update={"path": _abs(self.input.path)}),
            "embed": self.embed.model_copy(update={"init_layout": _abs(self.embed.init_layout)}),
            "output": self.output.model_copy(update={"directory": _abs(self.output.directory)}),
        })

    def resolved(self) -> dict:
        """Full config with every default written out, for provenance in reports."""
        return self.model_dump(mode="json")
