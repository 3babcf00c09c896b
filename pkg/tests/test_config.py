"""Tests for configuration management."""

import pytest

from src.models.pipeline_models import ColorBy, EmbedMethod, RelateRecipe
from src.utils import config as cfg
from src.utils.config import default_output_dir, load_pipeline_config
from src.utils.errors import ConfigError


def write_config(tmp_path, body, name="run.toml"):
    path = tmp_path / name
    path.write_text(body)
    return path


class TestLoadPipelineConfig:
    """Test pipeline config loading."""

    def test_load_success(self, pipeline_config_file):
        """Test loading the fixture config."""
        config = load_pipeline_config(pipeline_config_file)
        assert config.seed == 7
        assert config.relate.recipe == RelateRecipe.KNN
        assert config.embed.method == EmbedMethod.SPRING
        assert config.embed.iterations == 20
        assert config.output.color_by == ColorBy.CLOSENESS

    def test_file_not_found(self, tmp_path):
        """Test loading a non-existent config file."""
        with pytest.raises(ConfigError, match="not found"):
            load_pipeline_config(tmp_path / "nonexistent.toml")

    def test_invalid_toml(self, tmp_path):
        """Test a file that is not TOML."""
        path = write_config(tmp_path, "seed = = 3\n")
        with pytest.raises(ConfigError, match="Invalid config file"):
            load_pipeline_config(path)

    @pytest.mark.parametrize("body", [
        "seed = 1\n",  # no [input]
        '[input]\npath = "a.csv"\n[relate]\nrecipe = "isomap"\n',
        '[input]\npath = "a.csv"\n[relate]\nk = 0\n',
        '[input]\npath = "a.csv"\n[embed]\ndim = 4\n',
        '[input]\npath = "a.csv"\n[embed]\nmethod = "spring"\nspeed = 2\n',
        '[input]\npath = "a.csv"\n[output]\ncolor_by = "betweenness"\n',
        '[input]\npath = "a.csv"\n[embed]\ninit = "given"\n',
    ])
    def test_invalid_config(self, tmp_path, body):
        """Test missing sections, unknown names, out-of-range values and inconsistent options."""
        with pytest.raises(ConfigError, match="Invalid pipeline config"):
            load_pipeline_config(write_config(tmp_path, body))

    def test_relative_paths_resolve_against_config(self, tmp_path):
        """Test that input, init layout and output paths are relative to the config file."""
        sub = tmp_path / "configs"
        sub.mkdir()
        path = write_config(sub, (
            '[input]\npath = "../data/items.csv"\n'
            '[embed]\ninit = "given"\ninit_layout = "start.csv"\n'
            '[output]\ndirectory = "results"\n'
        ))
        config = load_pipeline_config(path)
        assert config.input.path == (tmp_path / "data" / "items.csv").resolve()
        assert config.embed.init_layout == (sub / "start.csv").resolve()
        assert config.output.directory == (sub / "results").resolve()

    def test_absolute_path_kept(self, tmp_path):
        """Test that absolute paths are left alone."""
        data = tmp_path / "abs.csv"
        config = load_pipeline_config(write_config(tmp_path, f'[input]\npath = "{data.as_posix()}"\n'))
        assert config.input.path == data

    @pytest.mark.parametrize("body,expected", [
        ('[relate]\nrecipe = "knn"\nk = 7\n', 7),
        ('[relate]\nrecipe = "umap"\nn_neighbors = 12\n', 12),
        ('[relate]\nrecipe = "knn"\nk = 7\n[quality]\nk = 3\n', 3),
    ])
    def test_shape_k(self, tmp_path, body, expected):
        """Test that the shape-graph k follows the relationship recipe unless set."""
        config = load_pipeline_config(write_config(tmp_path, '[input]\npath = "a.csv"\n' + body))
        assert config.shape_k == expected


class TestConstants:
    """Test configuration constants."""

    def test_tool_version(self):
        """Test the version string."""
        assert cfg.TOOL_VERSION == "0.1.0"

    def test_defaults(self):
        """Test the documented default parameters."""
        assert cfg.DEFAULT_SEED == 42
        assert cfg.DEFAULT_K == 10
        assert cfg.DEFAULT_PERPLEXITY == 10.0
        assert cfg.BARNES_HUT_THETA == 0.5
        assert 0.0 < cfg.DEFAULT_PRUNE_EPSILON < 1e-6

    def test_default_output_dir(self, temp_output_dir):
        """Test that the default output dir honors the patched location and is created."""
        out = default_output_dir()
        assert out == temp_output_dir
        assert out.is_dir()

    def test_default_output_dir_override(self, tmp_path):
        """Test an explicit output directory."""
        out = default_output_dir(str(tmp_path / "explicit"))
        assert out == tmp_path / "explicit"
        assert out.is_dir()
