"""Mapping stage: resolve the start layout and dispatch to an embedding method."""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.core.matrix_ops import matrix_from_graph
from src.embed.analytic import classical_mds, pca_init
from src.embed.initialization import start_coords
from src.embed.negative_sampling import negative_sampling_embed
from src.embed.neighbor_embedding import sne_embed, tsne_embed
from src.embed.sammon import sammon_embed
from src.embed.spring import spring_layout
from src.models.data_models import DataMatrix, Layout
from src.models.graph_models import RelationGraph, WeightSemantics
from src.models.pipeline_models import EmbedMethod, EmbedParams, InitKind
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

_DISTANCE_METHODS = {EmbedMethod.MDS, EmbedMethod.SAMMON}


@dataclass
class EmbedReport:
    """Report of a mapping run."""
    method: str = ""
    init: str = ""
    n_points: int = 0
    dim: int = 2
    iterations: Optional[int] = None


class EmbeddingEngine:
    """Turns a relationship graph (and optionally its data) into a layout."""

    def resolve_init(self, n: int, params: EmbedParams, data: Optional[DataMatrix] = None) -> Layout:
        """The start layout the iterative methods begin from."""
        if params.init == InitKind.PCA:
            if data is None:
                raise ConfigError("init 'pca' needs the data matrix; supply data or use init 'random'")
            return pca_init(data, params.dim)
        if params.init == InitKind.GIVEN and params.given_layout is None:
            # only reachable for method 'none': the data already is a layout
            if data is None or data.cols != params.dim:
                raise ConfigError(f"init 'given' without a layout needs {params.dim}-column data")
            return Layout(coords=data.values)
        coords, _ = start_coords(n, params, np.random.default_rng(params.seed))
        return Layout(coords=coords)

    def embed(
        self,
        g: RelationGraph,
        method: EmbedMethod,
        params: Optional[EmbedParams] = None,
        data: Optional[DataMatrix] = None,
    ) -> Tuple[Layout, EmbedReport]:
        params = params or EmbedParams()
        method = EmbedMethod(method)
        report = EmbedReport(method=method.value, init=params.init.value, n_points=g.n_vertices,
                             dim=params.dim, iterations=params.iterations)
        logger.info("Embedding %d vertices with %s (init=%s, seed=%d)",
                    g.n_vertices, method.value, params.init.value, params.seed)

        if method in _DISTANCE_METHODS:
            if g.semantics != WeightSemantics.DISSIMILARITY or not g.is_complete:
                raise ConfigError(
                    f"method '{method.value}' needs a complete dissimilarity graph; "
                    "use recipe 'complete' or the 'geodesic' transform"
                )
            D = matrix_from_graph(g)
            if method == EmbedMethod.MDS:
                return classical_mds(D, params.dim), report
            return sammon_embed(D, params, self.resolve_init(g.n_vertices, params, data)), report

        if method == EmbedMethod.PCA:
            if data is None:
                raise ConfigError("method 'pca' needs the data matrix")
            return pca_init(data, params.dim), report

        init = self.resolve_init(g.n_vertices, params, data)
        if method == EmbedMethod.NONE:
            init.require_points(g.n_vertices, "graph")
            return init, report
        if method == EmbedMethod.SPRING:
            return spring_layout(g, params, init), report
        if method == EmbedMethod.SNE:
            return sne_embed(g, params, init), report
        if method == EmbedMethod.TSNE:
            return tsne_embed(g, params, init), report
        return negative_sampling_embed(g, params, init), report
