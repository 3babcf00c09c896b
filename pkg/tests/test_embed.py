"""Tests for the embedding methods and EmbeddingEngine."""

import logging

import numpy as np
import pytest

from src.core.matrix_ops import distance_matrix, graph_from_matrix
from src.embed.analytic import classical_mds, pca_init
from src.embed.embed_engine import EmbeddingEngine
from src.embed.initialization import jitter_coincident, rescale, start_coords
from src.embed.negative_sampling import find_ab_params, make_epochs_per_sample, negative_sampling_embed
from src.embed.neighbor_embedding import (
    auto_learning_rate,
    clip_steps,
    joint_probabilities,
    sne_embed,
    sne_gradient,
    sne_objective,
    tsne_embed,
    tsne_gradient,
    tsne_objective,
)
from src.embed.sammon import sammon_embed, sammon_gradient, sammon_stress
from src.embed.spring import spring_layout
from src.models.data_models import DataMatrix, Layout
from src.models.graph_models import RelationGraph, WeightSemantics
from src.models.pipeline_models import EmbedMethod, EmbedParams, InitKind, RepulsionKind
from src.relate.neighbors import knn_graph
from src.relate.probability import tsne_probability_graph, umap_fuzzy_graph
from src.relate.transforms.similarity_flip import similarity_flip
from src.utils.errors import ConfigError, DataError


def numeric_gradient(objective, coords, h=1e-6):
    grad = np.zeros_like(coords)
    for idx in np.ndindex(coords.shape):
        plus, minus = coords.copy(), coords.copy()
        plus[idx] += h
        minus[idx] -= h
        grad[idx] = (objective(plus) - objective(minus)) / (2.0 * h)
    return grad


def make_small_problem(rng):
    """Eight points: source distances from 4-D data, a random 2-D layout and a dense P."""
    data = DataMatrix(values=rng.normal(size=(8, 4)))
    D = distance_matrix(data)
    coords = rng.normal(size=(8, 2))
    weights = rng.uniform(0.1, 1.0, size=(8, 8))
    weights = np.triu(weights, k=1)
    rows, cols = np.nonzero(weights)
    g = RelationGraph(n_vertices=8, rows=rows, cols=cols, weights=weights[rows, cols],
                      semantics=WeightSemantics.SIMILARITY)
    return D, coords, joint_probabilities(g)


@pytest.fixture
def small_problem(rng):
    return make_small_problem(rng)


@pytest.fixture
def given_params():
    """Build EmbedParams that start from an explicit layout."""
    def make(layout, **kwargs):
        return EmbedParams(init=InitKind.GIVEN, given_layout=layout, **kwargs)
    return make


class TestGradients:
    """Finite-difference checks of the analytic gradients."""

    def test_sammon(self, small_problem):
        """Test the Sammon stress gradient."""
        D, coords, _ = small_problem
        numeric = numeric_gradient(lambda y: sammon_stress(y, D), coords)
        assert np.allclose(sammon_gradient(coords, D), numeric, rtol=1e-4, atol=1e-8)

    def test_sne(self, small_problem):
        """Test the symmetric SNE gradient."""
        _, coords, P = small_problem
        coords = coords * 0.5
        numeric = numeric_gradient(lambda y: sne_objective(y, P), coords)
        assert np.allclose(sne_gradient(coords, P), numeric, rtol=1e-4, atol=1e-8)

    def test_tsne(self, small_problem):
        """Test the t-SNE gradient."""
        _, coords, P = small_problem
        numeric = numeric_gradient(lambda y: tsne_objective(y, P), coords)
        assert np.allclose(tsne_gradient(coords, P), numeric, rtol=1e-4, atol=1e-8)

    @pytest.mark.parametrize("seed", range(20))
    def test_all_gradients_across_seeds(self, seed):
        """Test all three analytic gradients on twenty independent random problems."""
        D, coords, P = make_small_problem(np.random.default_rng(seed))
        numeric = numeric_gradient(lambda y: sammon_stress(y, D), coords)
        assert np.allclose(sammon_gradient(coords, D), numeric, rtol=1e-4, atol=1e-8)
        numeric = numeric_gradient(lambda y: sne_objective(y, P), coords * 0.5)
        assert np.allclose(sne_gradient(coords * 0.5, P), numeric, rtol=1e-4, atol=1e-8)
        numeric = numeric_gradient(lambda y: tsne_objective(y, P), coords)
        assert np.allclose(tsne_gradient(coords, P), numeric, rtol=1e-4, atol=1e-8)

    def test_equilateral_triangle_is_stationary(self, triangle_layout):
        """Test that uniform P on an equilateral triangle has zero gradient."""
        P = np.full((3, 3), 1.0 / 6.0)
        np.fill_diagonal(P, 0.0)
        assert np.allclose(sne_gradient(triangle_layout, P), 0.0, atol=1e-12)
        assert np.allclose(tsne_gradient(triangle_layout, P), 0.0, atol=1e-12)
        D = triangle_layout.distance_matrix()
        assert np.allclose(sammon_gradient(triangle_layout, D), 0.0, atol=1e-12)
        assert sammon_stress(triangle_layout, D) == pytest.approx(0.0, abs=1e-24)

    def test_joint_probabilities(self, path_graph):
        """Test that P sums to 1 over ordered pairs and distances are refused."""
        sim = path_graph.with_weights(np.ones(4), WeightSemantics.SIMILARITY)
        P = joint_probabilities(sim)
        assert P.sum() == pytest.approx(1.0)
        assert P[0, 1] == pytest.approx(1.0 / 8.0)
        with pytest.raises(ConfigError):
            joint_probabilities(path_graph)


class TestAnalytic:
    """Test classical MDS and PCA."""

    def test_mds_equals_pca_on_euclidean_distances(self, random_data):
        """Test that MDS of Euclidean distances reproduces PCA scores up to column sign."""
        mds = classical_mds(distance_matrix(random_data), 2).coords
        pca = pca_init(random_data, 2).coords
        for c in range(2):
            assert np.allclose(mds[:, c], pca[:, c], atol=1e-8) or np.allclose(mds[:, c], -pca[:, c], atol=1e-8)

    def test_mds_recovers_planar_distances(self, planar_data):
        """Test that 2-D data is reproduced exactly up to rigid motion."""
        D = distance_matrix(planar_data)
        layout = classical_mds(D, 2)
        assert np.allclose(layout.distance_matrix(), D, atol=1e-8)

    def test_mds_padding(self, caplog):
        """Test that missing positive eigenvalues become zero coordinates."""
        D = np.array([[0.0, 2.0], [2.0, 0.0]])
        with caplog.at_level(logging.WARNING):
            layout = classical_mds(D, 3)
        assert layout.dim == 3
        assert np.all(layout.coords[:, 1:] == 0.0)
        assert abs(layout.coords[0, 0] - layout.coords[1, 0]) == pytest.approx(2.0)
        assert "padding" in caplog.text

    def test_pca_pads_extra_dimensions(self):
        """Test that PCA of one-column data leaves the second axis at zero."""
        data = DataMatrix(values=[[0.0], [1.0], [3.0]])
        coords = pca_init(data, 2).coords
        assert np.all(coords[:, 1] == 0.0)
        assert coords[:, 0].tolist() == pytest.approx([-4.0 / 3.0, -1.0 / 3.0, 5.0 / 3.0])

    def test_pca_is_deterministic(self, random_data):
        """Test that repeated PCA gives identical scores."""
        assert np.array_equal(pca_init(random_data).coords, pca_init(random_data).coords)


class TestInitialization:
    """Test start-layout helpers."""

    def test_random_is_seeded(self):
        """Test that equal seeds give equal random starts."""
        a, _ = start_coords(5, EmbedParams(seed=3), np.random.default_rng(3))
        b, _ = start_coords(5, EmbedParams(seed=3), np.random.default_rng(3))
        assert np.array_equal(a, b)

    def test_given_is_not_rescaled(self, triangle_layout, given_params):
        """Test that a given layout is used as-is."""
        coords, may_rescale = start_coords(3, given_params(triangle_layout), np.random.default_rng(0))
        assert np.array_equal(coords, triangle_layout.coords)
        assert not may_rescale

    def test_given_without_layout(self):
        """Test that init 'given' with nothing to give is a config error."""
        with pytest.raises(ConfigError, match="start layout"):
            start_coords(3, EmbedParams(init=InitKind.GIVEN), np.random.default_rng(0))

    def test_shape_mismatch(self, triangle_layout):
        """Test that the start layout must have one row per vertex."""
        with pytest.raises(DataError, match="shape"):
            start_coords(4, EmbedParams(), np.random.default_rng(0), init=triangle_layout)

    def test_rescale(self, rng):
        """Test centering and scaling to the requested spread."""
        coords = rescale(rng.normal(size=(20, 2)) * 5.0 + 3.0, 1e-4)
        assert np.allclose(coords.mean(axis=0), 0.0)
        assert coords.std(axis=0).max() == pytest.approx(1e-4)

    def test_jitter_coincident(self):
        """Test that duplicates separate and unique points stay put."""
        coords = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]])
        jittered = jitter_coincident(coords, np.random.default_rng(0))
        assert not np.array_equal(jittered[0], jittered[1])
        assert np.array_equal(jittered[2], coords[2])
        assert np.abs(jittered - coords).max() < 1e-7


class TestSpring:
    """Test the Fruchterman–Reingold layout."""

    def test_two_vertices_settle_at_ideal_length(self):
        """Test that one unit edge balances at K = sqrt(1 / N)."""
        g = RelationGraph.from_edges(2, [(0, 1, 1.0)], WeightSemantics.SIMILARITY)
        layout = spring_layout(g, EmbedParams(iterations=500))
        d = float(np.linalg.norm(layout.coords[0] - layout.coords[1]))
        assert d == pytest.approx(np.sqrt(0.5), abs=0.01)

    def test_rejects_distances(self, path_graph):
        """Test that distance weights must be flipped first."""
        with pytest.raises(ConfigError, match="flip"):
            spring_layout(path_graph)

    def test_deterministic(self, random_data):
        """Test that a fixed seed reproduces the layout bit for bit."""
        g = similarity_flip(knn_graph(random_data, 4))
        a = spring_layout(g, EmbedParams(seed=5, iterations=30))
        b = spring_layout(g, EmbedParams(seed=5, iterations=30))
        assert np.array_equal(a.coords, b.coords)


class TestSammon:
    """Test Sammon mapping."""

    def test_stress_never_increases(self, random_data, given_params, rng):
        """Test that the final stress is at most the starting stress."""
        D = distance_matrix(random_data)
        start = Layout(coords=rng.normal(size=(random_data.rows, 2)))
        layout = sammon_embed(D, given_params(start, iterations=50))
        assert sammon_stress(layout, D) <= sammon_stress(start, D)

    def test_duplicate_items_rejected(self):
        """Test that zero off-diagonal distances are refused."""
        D = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
        with pytest.raises(DataError, match="distance 0"):
            sammon_embed(D)


class TestNeighborEmbedding:
    """Test SNE and t-SNE optimization."""

    @pytest.fixture
    def blobs_graph(self, blobs_data):
        return tsne_probability_graph(blobs_data, perplexity=5.0)

    def test_tsne_lowers_kl(self, blobs_graph, rng):
        """Test that optimization lowers KL from a tight random start."""
        P = joint_probabilities(blobs_graph)
        start = Layout(coords=rng.normal(scale=1e-4, size=(24, 2)))
        params = EmbedParams(init=InitKind.GIVEN, given_layout=start, iterations=300, learning_rate=20.0,
                            exaggeration_iterations=50)
        layout = tsne_embed(blobs_graph, params)
        assert tsne_objective(layout, P) < tsne_objective(start, P)

    def test_sne_lowers_kl(self, blobs_graph, rng):
        """Test that SNE lowers its own objective."""
        P = joint_probabilities(blobs_graph)
        start = Layout(coords=rng.normal(scale=1e-4, size=(24, 2)))
        params = EmbedParams(init=InitKind.GIVEN, given_layout=start, iterations=200, learning_rate=1.0,
                            exaggeration_factor=1.0)
        layout = sne_embed(blobs_graph, params)
        assert sne_objective(layout, P) < sne_objective(start, P)

    def test_two_points_converge(self):
        """Test that two points joined by a p=1 edge move toward each other without overshooting."""
        g = RelationGraph.from_edges(2, [(0, 1, 1.0)], WeightSemantics.PROBABILITY)
        start = Layout(coords=[[0.0, 0.0], [1.0, 0.0]])
        distances = []
        for iterations in (1, 2, 5, 10, 30):
            layout = tsne_embed(g, EmbedParams(init=InitKind.GIVEN, given_layout=start, iterations=iterations))
            distances.append(float(np.linalg.norm(layout.coords[0] - layout.coords[1])))
        assert all(np.isfinite(distances))
        assert 0.0 < distances[-1] < distances[0] < 1.0
        assert distances == sorted(distances, reverse=True)

    def test_two_points_from_default_start(self):
        """Test that the default random start does not blow the pair apart."""
        g = RelationGraph.from_edges(2, [(0, 1, 1.0)], WeightSemantics.PROBABILITY)
        for iterations in (1, 5, 50):
            layout = tsne_embed(g, EmbedParams(iterations=iterations))
            assert np.linalg.norm(layout.coords[0] - layout.coords[1]) < 1e-3

    @pytest.mark.parametrize("n_points,exaggeration,expected", [
        (2, 12.0, 50.0),
        (1797, 12.0, 50.0),
        (24000, 12.0, 500.0),
        (400, 1.0, 100.0),
    ])
    def test_auto_learning_rate(self, n_points, exaggeration, expected):
        """Test the size-scaled default step with its floor of 50."""
        assert auto_learning_rate(n_points, exaggeration) == pytest.approx(expected)

    def test_step_clip(self):
        """Test that long steps are shortened to half the RMS radius and short ones pass through."""
        coords = np.array([[-1.0, 0.0], [1.0, 0.0]])
        update = np.array([[100.0, 0.0], [0.0, 0.1]])
        clipped = clip_steps(update, coords)
        assert clipped[0].tolist() == pytest.approx([0.5, 0.0])
        assert clipped[1].tolist() == pytest.approx([0.0, 0.1])

    def test_sne_crowds_more_than_tsne(self, blobs_graph, rng):
        """Test that the Gaussian kernel packs the layout tighter than the Student-t kernel."""
        start = Layout(coords=rng.normal(size=(24, 2)))
        params = EmbedParams(init=InitKind.GIVEN, given_layout=start, iterations=500, learning_rate=2.0,
                             exaggeration_factor=1.0)
        sne = sne_embed(blobs_graph, params)
        tsne = tsne_embed(blobs_graph, params)
        upper = np.triu_indices(24, k=1)
        assert sne.distance_matrix()[upper].mean() < tsne.distance_matrix()[upper].mean()

    def test_translation_equivariance(self, blobs_graph, rng):
        """Test that shifting a given start layout shifts the result."""
        start = rng.normal(size=(24, 2))
        shift = np.array([3.0, -2.0])
        quiet = {"iterations": 20, "learning_rate": 1.0, "exaggeration_factor": 1.0}
        a = tsne_embed(blobs_graph, EmbedParams(init=InitKind.GIVEN, given_layout=Layout(coords=start), **quiet))
        b = tsne_embed(blobs_graph, EmbedParams(init=InitKind.GIVEN, given_layout=Layout(coords=start + shift),
                                                **quiet))
        assert np.allclose(b.coords - shift, a.coords, atol=1e-6)

    def test_deterministic(self, blobs_graph):
        """Test that the seed fixes the result."""
        params = EmbedParams(seed=11, iterations=50)
        assert np.array_equal(tsne_embed(blobs_graph, params).coords, tsne_embed(blobs_graph, params).coords)

    def test_sne_refuses_barnes_hut(self, blobs_graph):
        """Test that Barnes–Hut is only offered for the Student-t kernel."""
        with pytest.raises(ConfigError, match="tsne"):
            sne_embed(blobs_graph, EmbedParams(repulsion=RepulsionKind.BARNES_HUT))

    def test_barnes_hut_tsne_runs(self, blobs_graph):
        """Test the approximate repulsion path end to end."""
        layout = tsne_embed(blobs_graph, EmbedParams(repulsion=RepulsionKind.BARNES_HUT, iterations=30))
        assert layout.coords.shape == (24, 2)


class TestNegativeSampling:
    """Test the edge-sampling layout."""

    def test_ab_params(self):
        """Test the fitted curve for the default spread and min_dist."""
        a, b = find_ab_params(1.0, 0.1)
        assert a == pytest.approx(1.577, rel=1e-2)
        assert b == pytest.approx(0.895, rel=1e-2)

    def test_epochs_per_sample(self):
        """Test sampling periods proportional to inverse weight."""
        assert make_epochs_per_sample(np.array([1.0, 0.5, 0.0]), 10).tolist() == [1.0, 2.0, -1.0]

    def test_runs_and_is_deterministic(self, blobs_data):
        """Test a short run for shape, finiteness and reproducibility."""
        g = umap_fuzzy_graph(blobs_data, n_neighbors=5)
        params = EmbedParams(iterations=50, seed=3)
        a = negative_sampling_embed(g, params)
        b = negative_sampling_embed(g, params)
        assert a.coords.shape == (24, 2)
        assert np.array_equal(a.coords, b.coords)

    def test_three_dimensions(self, blobs_data):
        """Test a 3-D layout."""
        g = umap_fuzzy_graph(blobs_data, n_neighbors=5)
        assert negative_sampling_embed(g, EmbedParams(dim=3, iterations=10)).dim == 3

    def test_star_leaves_spread_around_hub(self):
        """Test that negative samples push the leaves of a star apart and around the hub."""
        n_leaves = 8
        g = RelationGraph.from_edges(n_leaves + 1, [(0, j, 1.0) for j in range(1, n_leaves + 1)],
                                     WeightSemantics.SIMILARITY)
        angles = np.linspace(-0.3, 0.3, n_leaves)
        start = Layout(coords=np.vstack([[0.0, 0.0], np.column_stack([np.cos(angles), np.sin(angles)])]))

        def run(negative_samples):
            params = EmbedParams(init=InitKind.GIVEN, given_layout=start, iterations=300, learning_rate=0.05,
                                 negative_samples=negative_samples, seed=5)
            coords = negative_sampling_embed(g, params).coords
            spokes = coords[1:] - coords[0]
            leaf_spread = Layout(coords=coords[1:]).distance_matrix()[np.triu_indices(n_leaves, k=1)].mean()
            units = spokes / np.linalg.norm(spokes, axis=1, keepdims=True)
            return leaf_spread, float(np.linalg.norm(units.mean(axis=0)))

        spread_repelled, resultant_repelled = run(5)
        spread_attracted, _ = run(0)
        assert spread_repelled > 5.0 * spread_attracted
        # the start cone has resultant length ~0.985
        assert resultant_repelled < 0.5

    def test_rejects_distances(self, path_graph):
        """Test that dissimilarity graphs are refused."""
        with pytest.raises(ConfigError):
            negative_sampling_embed(path_graph)


class TestEmbeddingEngine:
    """Test method dispatch and start-layout resolution."""

    def test_mds_needs_complete_graph(self, path_graph):
        """Test that distance methods refuse sparse graphs."""
        with pytest.raises(ConfigError, match="complete dissimilarity"):
            EmbeddingEngine().embed(path_graph, EmbedMethod.MDS)

    def test_mds_dispatch(self, planar_data):
        """Test MDS through the engine with its report."""
        g = graph_from_matrix(distance_matrix(planar_data))
        layout, report = EmbeddingEngine().embed(g, EmbedMethod.MDS)
        assert report.method == "mds"
        assert layout.n_points == planar_data.rows

    def test_pca_needs_data(self, path_graph):
        """Test that PCA cannot run from a graph alone."""
        with pytest.raises(ConfigError, match="data matrix"):
            EmbeddingEngine().embed(path_graph, EmbedMethod.PCA)

    def test_pca_init_needs_data(self, random_data):
        """Test that init 'pca' without data is a config error."""
        g = similarity_flip(knn_graph(random_data, 3))
        with pytest.raises(ConfigError, match="pca"):
            EmbeddingEngine().embed(g, EmbedMethod.SPRING, EmbedParams(init=InitKind.PCA))

    def test_identity_method(self, planar_data):
        """Test that method 'none' returns the data columns as the layout."""
        g = knn_graph(planar_data, 3)
        layout, _ = EmbeddingEngine().embed(g, EmbedMethod.NONE, EmbedParams(init=InitKind.GIVEN), data=planar_data)
        assert np.array_equal(layout.coords, planar_data.values)

    def test_identity_needs_matching_columns(self, random_data):
        """Test that 5-column data cannot be a 2-D layout."""
        g = knn_graph(random_data, 3)
        with pytest.raises(ConfigError, match="2-column"):
            EmbeddingEngine().embed(g, EmbedMethod.NONE, EmbedParams(init=InitKind.GIVEN), data=random_data)

    def test_spring_from_pca(self, random_data):
        """Test a spring run started from PCA scores."""
        g = similarity_flip(knn_graph(random_data, 3))
        layout, report = EmbeddingEngine().embed(
            g, EmbedMethod.SPRING, EmbedParams(init=InitKind.PCA, iterations=10), data=random_data,
        )
        assert report.init == "pca"
        assert layout.coords.shape == (random_data.rows, 2)

    def test_sammon_dispatch(self, planar_data):
        """Test Sammon through the engine."""
        g = graph_from_matrix(distance_matrix(planar_data))
        layout, _ = EmbeddingEngine().embed(g, EmbedMethod.SAMMON, EmbedParams(iterations=5))
        assert layout.dim == 2
