"""End-to-end driver: relate → embed → quality, then write every artifact."""

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator

from src.core.matrix_ops import distance_matrix
from src.embed.embed_engine import EmbeddingEngine, EmbedReport
from src.models.data_models import DataMatrix, Layout
from src.models.graph_models import RelationGraph
from src.models.pipeline_models import ColorBy, PipelineConfig
from src.models.report_models import QualityReport, RunReport
from src.quality.quality_engine import QualityAnalyzer
from src.relate.relate_engine import RelateReport, RelationshipEngine
from src.render.svg_renderer import render_svg
from src.storage.csv_loader import load_csv
from src.storage.graph_io import write_graph
from src.storage.layout_io import read_layout, write_layout
from src.storage.report_io import write_report
from src.utils.errors import GraphDRError, PipelineStageError

logger = logging.getLogger(__name__)


@dataclass
class PipelineResult:
    """Everything one pipeline run produced, in memory and on disk."""
    data: DataMatrix
    graph: RelationGraph
    layout: Layout
    quality: QualityReport
    report: RunReport
    relate_report: RelateReport
    embed_report: EmbedReport
    artifacts: Dict[str, Path] = field(default_factory=dict)


@contextmanager
def _stage(name: str, timings_ms: Dict[str, float]) -> Iterator[None]:
    """Time a stage and prefix any failure with its name."""
    start = time.perf_counter()
    try:
        yield
    except PipelineStageError:
        raise
    except GraphDRError as e:
        raise PipelineStageError(name, e) from e
    finally:
        timings_ms[name] = round((time.perf_counter() - start) * 1000.0, 3)
    logger.info("Stage %s finished in %.1f ms", name, timings_ms[name])


def _color_source(config: PipelineConfig, data: DataMatrix, quality: QualityReport):
    """(labels, scores, score_name) for the SVG according to output.color_by."""
    color_by = config.output.color_by
    if color_by == ColorBy.LABELS:
        return data.labels, None, ""
    if color_by == ColorBy.NONE:
        return None, None, ""
    return None, quality.per_node[color_by.value], color_by.value


def run_pipeline(config: PipelineConfig, record_timings: bool = True) -> PipelineResult:
    """Run the three stages on the configured input and write graph, layout, report and SVG.

    With `record_timings=False` the report carries no wall times, so two runs with
    the same config produce byte-identical files.
    """
    timings: Dict[str, float] = {}
    metric = config.input.metric

    with _stage("load", timings):
        data = load_csv(config.input.path, config.input.has_header, config.input.label_column)
        given_layout = None
        if config.embed.init_layout is not None:
            given_layout = read_layout(config.embed.init_layout, config.embed.dim)

    with _stage("relate", timings):
        distances = distance_matrix(data, metric)
        graph, relate_report = RelationshipEngine().build(data, config.relate, metric, distances)

    with _stage("embed", timings):
        params = config.embed.to_params(config.seed, given_layout)
        layout, embed_report = EmbeddingEngine().embed(graph, config.embed.method, params, data)

    with _stage("quality", timings):
        quality = QualityAnalyzer().analyze(
            graph, layout,
            metrics=config.quality.metrics,
            k=config.shape_k,
            data=data,
            metric=metric,
            distances=distances,
            centralities=config.quality.centrality,
            path_cost=config.quality.path_cost,
        )

    out_dir = config.output.directory
    artifacts: Dict[str, Path] = {}
    with _stage("write", timings):
        artifacts["graph"] = write_graph(graph, out_dir / config.output.graph)
        artifacts["layout"] = write_layout(layout, out_dir / config.output.layout)
        if config.output.svg:
            labels, scores, score_name = _color_source(config, data, quality)
            artifacts["svg"] = render_svg(layout, out_dir / config.output.svg, labels=labels, scores=scores,
                                          title=f"{config.relate.recipe.value} / {config.embed.method.value}",
                                          score_name=score_name or "score")

    # the report goes last so its timings cover every other stage
    report = RunReport.from_quality(config.resolved(), quality, timings if record_timings else {})
    artifacts["report"] = write_report(report, out_dir / config.output.report)

    logger.info("Pipeline done: %s", ", ".join(f"{k}={v:.1f}ms" for k, v in timings.items()))
    return PipelineResult(
        data=data, graph=graph, layout=layout, quality=quality, report=report,
        relate_report=relate_report, embed_report=embed_report, artifacts=artifacts,
    )
