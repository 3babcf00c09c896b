"""Configuration management for graphdr."""

import logging
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from src.utils.errors import ConfigError

load_dotenv()

# Project paths
PROJECT_ROOT = Path(__file__).parent.parent.parent

# Output directory (overridable via env var for test isolation)
_output_dir = os.environ.get("GRAPHDR_OUTPUT_DIR")
OUTPUT_DIR = Path(_output_dir) if _output_dir else PROJECT_ROOT / "runs"

LOG_LEVEL = os.environ.get("GRAPHDR_LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# Tool info
TOOL_VERSION = "0.1.0"
GRAPH_FORMAT_VERSION = "v1"

DEFAULT_SEED = 42

# Relationship modeling
DEFAULT_K = 10
DEFAULT_PERPLEXITY = 10.0
DEFAULT_N_NEIGHBORS = 10
DEFAULT_PRUNE_EPSILON = 1e-8
DEFAULT_STRENGTHEN_FACTOR = 2.0

# Perplexity bisection on sigma
SIGMA_LOWER = 1e-10
SIGMA_UPPER = 1e10
PERPLEXITY_TOLERANCE = 1e-5  # on log2-perplexity (entropy in bits)
PERPLEXITY_MAX_STEPS = 100

# UMAP bandwidth search
UMAP_SIGMA_STEPS = 64
UMAP_SIGMA_TOLERANCE = 1e-5
UMAP_MIN_SIGMA_SCALE = 1e-3

# Mapping defaults per method (iterations, learning rate)
SPRING_ITERATIONS = 50
SPRING_AREA = 1.0
SPRING_START_TEMPERATURE = 0.1
SAMMON_ITERATIONS = 500
SAMMON_STEP = 1.0
SAMMON_MAX_HALVINGS = 30
NEIGHBOR_EMBED_ITERATIONS = 1000
# unset learning rate: max(N / exaggeration / 4, this floor)
NEIGHBOR_EMBED_MIN_LEARNING_RATE = 50.0
NEGATIVE_SAMPLING_EPOCHS = 200
NEGATIVE_SAMPLING_LEARNING_RATE = 1.0

# t-SNE / SNE optimizer schedule
EXAGGERATION_FACTOR = 12.0
EXAGGERATION_ITERATIONS = 250
MOMENTUM_START = 0.5
MOMENTUM_FINAL = 0.8
MOMENTUM_SWITCH_ITERATION = 250
MIN_GAIN = 0.01
# per-point step cap, as a fraction of the layout's RMS radius
MAX_STEP_FRACTION = 0.5
INIT_SCALE = 1e-4

# Negative sampling
NEGATIVE_SAMPLES = 5
MIN_DIST = 0.1
SPREAD = 1.0
GRADIENT_CLIP = 4.0
NEGATIVE_SAMPLING_INIT_EXTENT = 10.0

BARNES_HUT_THETA = 0.5
COINCIDENT_JITTER = 1e-9

# Rendering
SVG_WIDTH = 800
SVG_HEIGHT = 600
SVG_LEGEND_WIDTH = 160
SVG_MARGIN_FRACTION = 0.05
SVG_POINT_RADIUS_FRACTION = 0.004
CATEGORICAL_COLORMAP = "tab10"
CATEGORICAL_COLORMAP_LARGE = "tab20"
SEQUENTIAL_COLORMAP = "viridis"

logger = logging.getLogger(__name__)


def load_pipeline_config(config_file: str | Path):
    """Load and validate a pipeline configuration file.

    File format (TOML):
        seed = 42
        [input]    path, has_header, label_column, metric
        [relate]   recipe, k, perplexity, n_neighbors, prune_epsilon, transforms
        [embed]    method, iterations, learning_rate, init, ...
        [quality]  metrics, k, centrality
        [output]   directory, graph, layout, report, svg, color_by
    """
    from src.models.pipeline_models import PipelineConfig

    file_path = Path(config_file)
    if not file_path.exists():
        raise ConfigError(f"Config file not found: {file_path}")

    try:
        with open(file_path, "rb") as f:
            raw = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Invalid config file {file_path}: {e}") from e

    try:
        config = PipelineConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"Invalid pipeline config in {file_path}:\n{e}") from e

    # Relative data/output paths are resolved against the config file location
    config = config.resolve_paths(file_path.parent)
    logger.info("Loaded pipeline config: %s (recipe=%s, method=%s)",
                file_path, config.relate.recipe.value, config.embed.method.value)
    return config


def default_output_dir(override: Optional[str] = None) -> Path:
    """Output directory for CLI runs: explicit option, env override, or ./runs."""
    out = Path(override) if override else OUTPUT_DIR
    out.mkdir(parents=True, exist_ok=True)
    return out
