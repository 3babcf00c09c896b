"""Shared pytest fixtures for graphdr tests."""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.models.data_models import DataMatrix, Layout
from src.models.graph_models import RelationGraph, WeightSemantics

FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng():
    """Seeded generator for test inputs."""
    return np.random.default_rng(1234)


@pytest.fixture
def random_data(rng):
    """30 items in 5 dimensions, no labels."""
    return DataMatrix(values=rng.normal(size=(30, 5)))


@pytest.fixture
def planar_data(rng):
    """25 items in 2 dimensions, so the data already is a layout."""
    return DataMatrix(values=rng.uniform(-1.0, 1.0, size=(25, 2)))


@pytest.fixture
def blobs_data(rng):
    """Three tight, far-apart clusters of 8 points with labels 0, 1, 2."""
    centers = np.array([[0.0, 0.0, 0.0], [20.0, 0.0, 0.0], [0.0, 20.0, 0.0]])
    values = np.concatenate([c + rng.normal(scale=0.5, size=(8, 3)) for c in centers])
    labels = np.repeat([0, 1, 2], 8)
    return DataMatrix(values=values, labels=labels)


@pytest.fixture
def path_graph():
    """Path 0-1-2-3-4 with unit distances."""
    return RelationGraph.from_edges(5, [(i, i + 1, 1.0) for i in range(4)], WeightSemantics.DISSIMILARITY)


@pytest.fixture
def star_graph():
    """Vertex 0 joined to 1..4 with unit distances."""
    return RelationGraph.from_edges(5, [(0, j, 1.0) for j in range(1, 5)], WeightSemantics.DISSIMILARITY)


@pytest.fixture
def triangle_layout():
    """Equilateral triangle with unit sides."""
    return Layout(coords=[[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]])


@pytest.fixture
def sample_csv(tmp_path):
    """Six labelled 2D items with a header row."""
    path = tmp_path / "sample.csv"
    path.write_text(
        "x,y,class\n"
        "0.0,0.0,0\n"
        "0.1,0.2,0\n"
        "0.2,0.1,0\n"
        "5.0,5.0,1\n"
        "5.1,5.2,1\n"
        "5.2,5.1,1\n"
    )
    return path


@pytest.fixture(scope="session")
def digits_frame():
    """The full digits table (1,797 x 64 + label) from scikit-learn's bundled copy; only the `-m digits` runs need it."""
    from sklearn.datasets import load_digits

    digits = load_digits()
    frame = pd.DataFrame(digits.data, columns=[f"p{i}" for i in range(digits.data.shape[1])])
    frame["label"] = digits.target
    return frame


@pytest.fixture(scope="session")
def digits_200_csv():
    """The committed first 200 digits: 64 integer pixel columns p0..p63 and a `label` column."""
    return FIXTURES_DIR / "digits_200.csv"


@pytest.fixture(scope="session")
def digits_full_csv(tmp_path_factory, digits_frame):
    """All 1,797 digits as a CSV with a `label` column."""
    path = tmp_path_factory.mktemp("digits_full") / "digits.csv"
    digits_frame.to_csv(path, index=False)
    return path


@pytest.fixture
def temp_output_dir(tmp_path, monkeypatch):
    """Point the default output directory at a temp dir."""
    out = tmp_path / "runs"
    monkeypatch.setattr("src.utils.config.OUTPUT_DIR", out)
    return out


@pytest.fixture
def pipeline_config_file(tmp_path, sample_csv):
    """Minimal pipeline config next to the sample CSV (k-NN, spring, faithfulness)."""
    path = tmp_path / "pipeline.toml"
    path.write_text(
        "seed = 7\n"
        "\n"
        "[input]\n"
        f'path = "{sample_csv.name}"\n'
        'label_column = "class"\n'
        "\n"
        "[relate]\n"
        'recipe = "knn"\n'
        "k = 2\n"
        'transforms = ["flip"]\n'
        "\n"
        "[embed]\n"
        'method = "spring"\n'
        "iterations = 20\n"
        "\n"
        "[quality]\n"
        'metrics = ["faithfulness", "stress", "neighbor_hit"]\n'
        'centrality = ["closeness"]\n'
        "\n"
        "[output]\n"
        'directory = "out"\n'
        'color_by = "closeness"\n'
    )
    return path
