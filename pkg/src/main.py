"""CLI entry point for graphdr."""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from src.utils import config as cfg
from src.utils.config import LOG_FORMAT, TOOL_VERSION, default_output_dir, load_pipeline_config
from src.utils.errors import GraphDRError
from src.models.data_models import DistanceMetric
from src.models.graph_models import CentralityKind, PathCost
from src.models.pipeline_models import (
    EmbedMethod, EmbedParams, GraphTransform, InitKind, QualityMetric, RelateRecipe,
    RelateSection, RepulsionKind,
)
from src.models.report_models import QualityReport, RunReport

app = typer.Typer(
    name="graphdr",
    help="graphdr - graph-based dimensionality reduction: relate, embed, and check quality.",
    add_completion=False,
)
console = Console()

logging.basicConfig(
    level=getattr(logging, cfg.LOG_LEVEL, logging.INFO),
    format=LOG_FORMAT,
    datefmt="%H:%M:%S",
)
logger = logging.getLogger(__name__)

ITERATIONS_HELP = (
    f"Iterations (epochs for negative_sampling). Defaults: spring {cfg.SPRING_ITERATIONS}, "
    f"sammon {cfg.SAMMON_ITERATIONS}, sne/tsne {cfg.NEIGHBOR_EMBED_ITERATIONS}, "
    f"negative_sampling {cfg.NEGATIVE_SAMPLING_EPOCHS}; mds and pca take none"
)
LEARNING_RATE_HELP = (
    f"Step size. Defaults: sammon {cfg.SAMMON_STEP:g}, "
    f"sne/tsne max(N / exaggeration / 4, {cfg.NEIGHBOR_EMBED_MIN_LEARNING_RATE:g}), "
    f"negative_sampling {cfg.NEGATIVE_SAMPLING_LEARNING_RATE:g}; spring cools from temperature "
    f"{cfg.SPRING_START_TEMPERATURE:g} instead"
)


@contextmanager
def _cli_errors() -> Iterator[None]:
    """Print domain and validation errors in red and exit with their code."""
    try:
        yield
    except GraphDRError as e:
        console.print(f"[red]{type(e).__name__}: {escape(str(e))}")
        raise typer.Exit(e.exit_code)
    except ValidationError as e:
        console.print(f"[red]Invalid parameters:\n{escape(str(e))}")
        raise typer.Exit(2)


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log optimizer progress (DEBUG level)"),
):
    """graphdr command line."""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


def _metrics_table(report: QualityReport, title: str = "Quality") -> Table:
    table = Table(title=title)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")
    for name, value in report.scalars.items():
        table.add_row(name, f"{value:.4f}")
    for name, values in report.per_node.items():
        table.add_row(f"{name} (per node)", f"mean {sum(values) / max(len(values), 1):.4f}")
    return table


@app.command()
def relate(
    input_path: Path = typer.Option(..., "--input", "-i", help="CSV file with one data item per row"),
    out: Path = typer.Option(Path("graph.tsv"), "--out", "-o", help="Edge-list file to write"),
    has_header: bool = typer.Option(True, "--header/--no-header", help="First CSV row holds column names"),
    label_column: Optional[str] = typer.Option(None, "--label-column", help="Label column name or index"),
    metric: DistanceMetric = typer.Option(DistanceMetric.EUCLIDEAN, "--metric", help="Distance metric"),
    recipe: RelateRecipe = typer.Option(RelateRecipe.KNN, "--recipe", help="Relationship recipe"),
    k: int = typer.Option(cfg.DEFAULT_K, "--k", help="Neighbors for knn/snn"),
    perplexity: float = typer.Option(cfg.DEFAULT_PERPLEXITY, "--perplexity", help="Perplexity for tsne"),
    n_neighbors: int = typer.Option(cfg.DEFAULT_N_NEIGHBORS, "--n-neighbors", help="Neighbors for umap (self included)"),
    prune_epsilon: float = typer.Option(cfg.DEFAULT_PRUNE_EPSILON, "--prune-epsilon", help="Drop tsne edges below this"),
    transforms: List[GraphTransform] = typer.Option([], "--transform", "-t", help="Transform to apply, repeatable, in order"),
    strengthen_factor: float = typer.Option(cfg.DEFAULT_STRENGTHEN_FACTOR, "--strengthen-factor",
                                            help="Backbone factor for mst_strengthen"),
):
    """Build a relationship graph from a data table and write it as an edge list."""
    from src.relate.relate_engine import RelationshipEngine
    from src.storage.csv_loader import load_csv
    from src.storage.graph_io import write_graph

    with _cli_errors():
        data = load_csv(input_path, has_header, label_column)
        section = RelateSection(recipe=recipe, k=k, perplexity=perplexity, n_neighbors=n_neighbors,
                                prune_epsilon=prune_epsilon, transforms=transforms,
                                strengthen_factor=strengthen_factor)
        graph, report = RelationshipEngine().build(data, section, metric)
        write_graph(graph, out)

    table = Table(title=f"Relationships ({report.recipe}, {report.n_vertices} items)")
    table.add_column("Step", style="cyan")
    table.add_column("Edges", justify="right")
    table.add_column("Mean degree", justify="right")
    table.add_column("Weights", justify="right")
    table.add_column("Semantics")
    for step in report.steps:
        table.add_row(step.name, str(step.edges), f"{step.mean_degree:.2f}",
                      f"{step.min_weight:.4g} .. {step.max_weight:.4g}", step.semantics)
    console.print(table)
    console.print(f"[green]Graph written to {out}")


@app.command()
def embed(
    graph_path: Path = typer.Option(..., "--graph", "-g", help="Edge-list file from 'relate'"),
    out: Path = typer.Option(Path("layout.csv"), "--out", "-o", help="Layout CSV to write"),
    method: EmbedMethod = typer.Option(EmbedMethod.SPRING, "--method", "-m", help="Mapping method"),
    dim: int = typer.Option(2, "--dim", min=2, max=3, help="Layout dimension"),
    iterations: Optional[int] = typer.Option(None, "--iterations", help=ITERATIONS_HELP),
    learning_rate: Optional[float] = typer.Option(None, "--learning-rate", help=LEARNING_RATE_HELP),
    init: InitKind = typer.Option(InitKind.RANDOM, "--init", help="Start layout"),
    init_layout: Optional[Path] = typer.Option(None, "--init-layout", help="Layout CSV for --init given"),
    input_path: Optional[Path] = typer.Option(None, "--input", "-i", help="Data CSV (needed for pca)"),
    has_header: bool = typer.Option(True, "--header/--no-header", help="First CSV row holds column names"),
    label_column: Optional[str] = typer.Option(None, "--label-column", help="Label column name or index"),
    seed: int = typer.Option(cfg.DEFAULT_SEED, "--seed", help="Random seed"),
    repulsion: RepulsionKind = typer.Option(RepulsionKind.EXACT, "--repulsion", help="t-SNE repulsion"),
    theta: float = typer.Option(cfg.BARNES_HUT_THETA, "--theta", help="Barnes-Hut opening angle"),
    exaggeration_factor: float = typer.Option(cfg.EXAGGERATION_FACTOR, "--exaggeration",
                                              help="Early exaggeration factor"),
    exaggeration_iterations: int = typer.Option(cfg.EXAGGERATION_ITERATIONS, "--exaggeration-iterations",
                                                help="Iterations with exaggeration"),
    negative_samples: int = typer.Option(cfg.NEGATIVE_SAMPLES, "--negative-samples",
                                         help="Negatives per edge sample"),
    min_dist: float = typer.Option(cfg.MIN_DIST, "--min-dist", help="Negative-sampling curve min_dist"),
    spread: float = typer.Option(cfg.SPREAD, "--spread", help="Negative-sampling curve spread"),
):
    """Map a relationship graph into 2D/3D coordinates."""
    from src.embed.embed_engine import EmbeddingEngine
    from src.storage.csv_loader import load_csv
    from src.storage.graph_io import read_graph
    from src.storage.layout_io import read_layout, write_layout

    with _cli_errors():
        graph = read_graph(graph_path)
        data = load_csv(input_path, has_header, label_column) if input_path else None
        given = read_layout(init_layout, dim) if init_layout else None
        params = EmbedParams(
            dim=dim, iterations=iterations, learning_rate=learning_rate, seed=seed, init=init,
            given_layout=given, exaggeration_factor=exaggeration_factor,
            exaggeration_iterations=exaggeration_iterations, negative_samples=negative_samples,
            repulsion=repulsion, theta=theta, min_dist=min_dist, spread=spread,
        )
        layout, report = EmbeddingEngine().embed(graph, method, params, data)
        write_layout(layout, out)

    console.print(Panel(
        f"Method: [cyan]{report.method}[/]  Init: {report.init}  Seed: {seed}\n"
        f"Points: {report.n_points}  Dimension: {report.dim}\n"
        f"Layout written to [green]{out}",
        title="Embedding",
    ))


@app.command()
def quality(
    graph_path: Path = typer.Option(..., "--graph", "-g", help="Edge-list file"),
    layout_path: Path = typer.Option(..., "--layout", "-l", help="Layout CSV"),
    metrics: List[QualityMetric] = typer.Option([QualityMetric.FAITHFULNESS.value], "--metric",
                                                help="Metric to compute, repeatable"),
    k: int = typer.Option(cfg.DEFAULT_K, "--k", help="Neighbors for shape graph and neighbor metrics"),
    input_path: Optional[Path] = typer.Option(None, "--input", "-i", help="Data CSV (for data-space metrics)"),
    has_header: bool = typer.Option(True, "--header/--no-header", help="First CSV row holds column names"),
    label_column: Optional[str] = typer.Option(None, "--label-column", help="Label column name or index"),
    distance: DistanceMetric = typer.Option(DistanceMetric.EUCLIDEAN, "--distance", help="Data-space metric"),
    centralities: List[CentralityKind] = typer.Option([], "--centrality", help="Per-node centrality, repeatable"),
    path_cost: PathCost = typer.Option(PathCost.HOP, "--path-cost", help="Edge cost for centralities"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Report JSON to write"),
):
    """Score a layout against its graph (and data, when given)."""
    from src.quality.quality_engine import QualityAnalyzer
    from src.storage.csv_loader import load_csv
    from src.storage.graph_io import read_graph
    from src.storage.layout_io import read_layout
    from src.storage.report_io import write_report

    with _cli_errors():
        graph = read_graph(graph_path)
        layout = read_layout(layout_path)
        data = load_csv(input_path, has_header, label_column) if input_path else None
        report = QualityAnalyzer().analyze(
            graph, layout, metrics=metrics, k=k, data=data, metric=distance,
            centralities=centralities, path_cost=path_cost,
        )
        if out:
            settings = {"graph": str(graph_path), "layout": str(layout_path), "k": k,
                        "metrics": [QualityMetric(m).value for m in metrics],
                        "centrality": [CentralityKind(c).value for c in centralities],
                        "path_cost": PathCost(path_cost).value, "tool_version": TOOL_VERSION}
            write_report(RunReport.from_quality(settings, report, {}), out)

    console.print(_metrics_table(report))
    if out:
        console.print(f"[green]Report written to {out}")


@app.command()
def render(
    layout_path: Path = typer.Option(..., "--layout", "-l", help="Layout CSV"),
    out: Path = typer.Option(Path("layout.svg"), "--out", "-o", help="SVG file to write"),
    input_path: Optional[Path] = typer.Option(None, "--input", "-i", help="Data CSV providing labels"),
    has_header: bool = typer.Option(True, "--header/--no-header", help="First CSV row holds column names"),
    label_column: Optional[str] = typer.Option(None, "--label-column", help="Label column name or index"),
    report_path: Optional[Path] = typer.Option(None, "--report", help="Report JSON providing per-node scores"),
    score: Optional[str] = typer.Option(None, "--score", help="Per-node vector in the report, e.g. closeness"),
    title: Optional[str] = typer.Option(None, "--title", help="SVG title"),
):
    """Draw a layout as an SVG scatter plot colored by labels or per-node scores."""
    from src.render.svg_renderer import render_svg
    from src.storage.csv_loader import load_csv
    from src.storage.layout_io import read_layout
    from src.storage.report_io import read_report
    from src.utils.errors import ConfigError, DataError

    with _cli_errors():
        layout = read_layout(layout_path)
        labels = scores = None
        if input_path:
            labels = load_csv(input_path, has_header, label_column).labels
        if report_path or score:
            if not (report_path and score):
                raise ConfigError("--report and --score go together")
            per_node = read_report(report_path).per_node
            if score not in per_node:
                raise DataError(f"Report has no per-node '{score}' (available: {sorted(per_node) or 'none'})")
            scores = per_node[score]
        render_svg(layout, out, labels=labels, scores=scores, title=title, score_name=score or "score")

    console.print(f"[green]SVG written to {out} ({layout.n_points} points)")


@app.command()
def pipeline(
    config_file: Path = typer.Option(..., "--config", "-c", help="Pipeline config (TOML)"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", help="Override output.directory"),
    timings: bool = typer.Option(True, "--timings/--no-timings", help="Record stage wall times in the report"),
):
    """Run relate, embed and quality from one config file and write every artifact."""
    from src.pipeline.pipeline_runner import run_pipeline

    with _cli_errors():
        config = load_pipeline_config(config_file)
        if output_dir is not None:
            config = config.model_copy(update={
                "output": config.output.model_copy(update={"directory": output_dir}),
            })
        result = run_pipeline(config, record_timings=timings)

    console.print(_metrics_table(result.quality, title="Pipeline quality"))
    table = Table(title="Artifacts")
    table.add_column("Kind", style="cyan")
    table.add_column("Path")
    for kind, path in result.artifacts.items():
        table.add_row(kind, str(path))
    console.print(table)
    if timings:
        console.print("  ".join(f"{stage}: {ms:.0f} ms" for stage, ms in result.report.timings_ms.items()))


@app.command()
def experiments(
    input_path: Path = typer.Option(..., "--input", "-i", help="Digits CSV from scripts/fetch_digits.py"),
    label_column: Optional[str] = typer.Option("label", "--label-column", help="Label column name or index"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", help="Directory for layouts, SVGs and results"),
    k: int = typer.Option(cfg.DEFAULT_K, "--k", help="Neighbors for knn/snn and shape graphs"),
    perplexity: float = typer.Option(cfg.DEFAULT_PERPLEXITY, "--perplexity", help="t-SNE graph perplexity"),
    n_neighbors: int = typer.Option(cfg.DEFAULT_N_NEIGHBORS, "--n-neighbors", help="UMAP graph neighbors"),
    seed: int = typer.Option(cfg.DEFAULT_SEED, "--seed", help="Random seed"),
    tsne_iterations: Optional[int] = typer.Option(None, "--tsne-iterations", help="t-SNE iterations (default 1000)"),
    epochs: Optional[int] = typer.Option(None, "--epochs", help="Negative-sampling epochs (default 200)"),
):
    """Run the digits experiment suite and print the faithfulness table."""
    from src.pipeline.experiments import ExperimentSettings, ExperimentSuite
    from src.storage.csv_loader import load_csv

    with _cli_errors():
        data = load_csv(input_path, True, label_column)
        out_dir = output_dir or default_output_dir() / "experiments"
        out_dir.mkdir(parents=True, exist_ok=True)
        settings = ExperimentSettings(k=k, perplexity=perplexity, n_neighbors=n_neighbors, seed=seed,
                                      tsne_iterations=tsne_iterations, negative_sampling_epochs=epochs)
        with console.status("[bold green]Running experiments..."):
            results = ExperimentSuite(settings).run(data, out_dir)

    table = Table(title=f"Experiments ({data.rows} items, k={k}, seed={seed})")
    table.add_column("Group", style="dim")
    table.add_column("Measure", style="cyan")
    table.add_column("Value", justify="right")
    for row in results.rows:
        table.add_row(row.group, row.name, f"{row.value:.4f}")
    console.print(table)
    if results.per_label:
        groups = Table(title="Closeness per label (t-SNE graph | UMAP graph)")
        for column in ("Label", "Items", "t-SNE closeness", "t-SNE hit", "UMAP closeness", "UMAP hit"):
            groups.add_column(column, justify="left" if column == "Label" else "right")
        for label, row in results.per_label.items():
            umap_row = results.per_label_umap[label]
            groups.add_row(label, f"{row['count']:.0f}", f"{row['closeness']:.4f}", f"{row['neighbor_hit']:.3f}",
                           f"{umap_row['closeness']:.4f}", f"{umap_row['neighbor_hit']:.3f}")
        console.print(groups)
    console.print(f"[green]Results written to {results.artifacts['results']}")


if __name__ == "__main__":
    app()
