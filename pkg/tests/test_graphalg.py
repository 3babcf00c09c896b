"""Tests for shortest paths, components, MST and centralities, with networkx as oracle."""

import itertools

import networkx as nx
import numpy as np
import pytest

from src.graphalg.centrality import betweenness_centrality, centrality, closeness_centrality
from src.graphalg.paths import (
    all_pairs_shortest_paths,
    component_count,
    connected_components,
    edge_costs,
    require_connected,
    single_source_shortest_paths,
)
from src.graphalg.spanning import DisjointSet, minimum_spanning_tree
from src.models.graph_models import CentralityKind, PathCost, RelationGraph, WeightSemantics
from src.utils.errors import ConfigError, DataError


def random_graph_pair(seed, integer_weights=False, connected=False):
    """A random RelationGraph (N <= 12) and the equivalent networkx graph."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 13))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.35 or (connected and j == i + 1):
                w = float(rng.integers(1, 4)) if integer_weights else float(rng.uniform(0.1, 2.0))
                edges.append((i, j, w))
    g = RelationGraph.from_edges(n, edges, WeightSemantics.DISSIMILARITY)
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_weighted_edges_from(edges)
    return g, G


class TestEdgeCosts:
    """Test explicit weight-to-cost conversions."""

    def test_hop(self, path_graph):
        """Test that hop cost is 1 per edge."""
        assert edge_costs(path_graph, PathCost.HOP).tolist() == [1.0] * 4

    def test_weight_needs_dissimilarity(self):
        """Test that similarity weights are never used as lengths."""
        g = RelationGraph.from_edges(2, [(0, 1, 0.5)], WeightSemantics.SIMILARITY)
        with pytest.raises(ConfigError, match="dissimilarity"):
            edge_costs(g, PathCost.WEIGHT)

    def test_negative_weight_rejected(self):
        """Test that negative distances are rejected for weighted paths."""
        g = RelationGraph.from_edges(2, [(0, 1, -1.0)], WeightSemantics.DISSIMILARITY)
        with pytest.raises(DataError, match="Negative"):
            edge_costs(g, PathCost.WEIGHT)

    def test_one_minus_weight_range(self):
        """Test that 1 - w needs weights in [0, 1]."""
        g = RelationGraph.from_edges(2, [(0, 1, 2.0)], WeightSemantics.SIMILARITY)
        with pytest.raises(ConfigError, match="one_minus_weight"):
            edge_costs(g, PathCost.ONE_MINUS_WEIGHT)

    def test_one_minus_weight(self):
        """Test the 1 - w conversion."""
        g = RelationGraph.from_edges(3, [(0, 1, 0.25), (1, 2, 1.0)], WeightSemantics.PROBABILITY)
        assert edge_costs(g, PathCost.ONE_MINUS_WEIGHT).tolist() == [0.75, 0.0]


class TestShortestPaths:
    """Test single-source and all-pairs shortest paths."""

    def test_path_graph(self, path_graph):
        """Test distances along a path."""
        assert single_source_shortest_paths(path_graph, 0).tolist() == [0.0, 1.0, 2.0, 3.0, 4.0]

    def test_unreachable_is_infinite(self):
        """Test that vertices in other components are at infinity."""
        g = RelationGraph.from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)], WeightSemantics.DISSIMILARITY)
        dist = single_source_shortest_paths(g, 0)
        assert dist[1] == 1.0
        assert np.isinf(dist[2]) and np.isinf(dist[3])

    def test_source_out_of_range(self, path_graph):
        """Test that the source must be a vertex."""
        with pytest.raises(DataError, match="out of range"):
            single_source_shortest_paths(path_graph, 5)

    @pytest.mark.parametrize("seed", range(50))
    def test_matches_networkx(self, seed):
        """Test weighted single-source distances against networkx Dijkstra."""
        g, G = random_graph_pair(seed)
        dist = single_source_shortest_paths(g, 0)
        expected = nx.single_source_dijkstra_path_length(G, 0)
        for v in range(g.n_vertices):
            if v in expected:
                assert dist[v] == pytest.approx(expected[v], abs=1e-9)
            else:
                assert np.isinf(dist[v])

    def test_all_pairs_symmetric(self):
        """Test that the all-pairs matrix is symmetric with zero diagonal."""
        g, _ = random_graph_pair(3, connected=True)
        dist = all_pairs_shortest_paths(g)
        assert np.allclose(dist, dist.T)
        assert np.all(np.diag(dist) == 0.0)


class TestComponents:
    """Test connected components."""

    def test_labels(self):
        """Test component labels on two pieces and an isolated vertex."""
        g = RelationGraph.from_edges(5, [(0, 1, 1.0), (2, 3, 1.0)], WeightSemantics.DISSIMILARITY)
        labels = connected_components(g)
        assert labels[0] == labels[1]
        assert labels[2] == labels[3]
        assert len({labels[0], labels[2], labels[4]}) == 3
        assert component_count(g) == 3

    @pytest.mark.parametrize("seed", range(20))
    def test_count_matches_networkx(self, seed):
        """Test the component count against networkx."""
        g, G = random_graph_pair(seed)
        assert component_count(g) == nx.number_connected_components(G)

    def test_require_connected(self):
        """Test that disconnected input is reported with its component count."""
        g = RelationGraph.from_edges(3, [(0, 1, 1.0)], WeightSemantics.DISSIMILARITY)
        with pytest.raises(DataError, match="2 components"):
            require_connected(g, "Test")


class TestMinimumSpanningTree:
    """Test Kruskal's MST."""

    def test_disjoint_set(self):
        """Test union-find merging."""
        ds = DisjointSet(4)
        assert ds.union(0, 1)
        assert ds.union(2, 3)
        assert not ds.union(1, 0)
        assert ds.union(1, 3)
        assert ds.find(0) == ds.find(2)

    def test_triangle(self):
        """Test that the heaviest triangle edge is dropped."""
        g = RelationGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)], WeightSemantics.DISSIMILARITY)
        tree = minimum_spanning_tree(g)
        assert list(tree.edges()) == [(0, 1, 1.0), (1, 2, 2.0)]

    def test_tie_break_by_pair(self):
        """Test that equal weights resolve by (i, j)."""
        g = RelationGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], WeightSemantics.DISSIMILARITY)
        assert [(i, j) for i, j, _ in minimum_spanning_tree(g).edges()] == [(0, 1), (0, 2)]

    def test_disconnected_rejected(self):
        """Test that a spanning tree needs a connected graph."""
        g = RelationGraph.from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)], WeightSemantics.DISSIMILARITY)
        with pytest.raises(DataError, match="connected"):
            minimum_spanning_tree(g)

    @pytest.mark.parametrize("seed", range(50))
    def test_matches_networkx(self, seed):
        """Test the MST edge set against networkx (distinct random weights)."""
        g, G = random_graph_pair(seed, connected=True)
        tree = minimum_spanning_tree(g)
        expected = {tuple(sorted(e)) for e in nx.minimum_spanning_tree(G).edges()}
        assert {(i, j) for i, j, _ in tree.edges()} == expected
        assert tree.n_edges == g.n_vertices - 1

    @pytest.mark.parametrize("seed", range(20))
    def test_minimum_over_all_spanning_trees(self, seed):
        """Test that no spanning tree found by enumeration is lighter."""
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 8))
        pairs = [(i, i + 1) for i in range(n - 1)]
        pairs += [(i, j) for i in range(n) for j in range(i + 2, n) if rng.random() < 0.5]
        edges = [(i, j, float(rng.integers(1, 10))) for i, j in pairs]
        g = RelationGraph.from_edges(n, edges, WeightSemantics.DISSIMILARITY)

        best = np.inf
        for subset in itertools.combinations(edges, n - 1):
            ds = DisjointSet(n)
            if all(ds.union(i, j) for i, j, _ in subset):
                best = min(best, sum(w for _, _, w in subset))
        assert float(minimum_spanning_tree(g).weights.sum()) == best


class TestCloseness:
    """Test closeness centrality."""

    def test_path_graph(self, path_graph):
        """Test hop closeness along a path: ends 4/10, center 4/6."""
        values = closeness_centrality(path_graph).values
        assert values[0] == pytest.approx(0.4)
        assert values[2] == pytest.approx(4.0 / 6.0)
        assert values[0] == pytest.approx(values[4])

    def test_isolated_vertex_is_zero(self):
        """Test that an isolated vertex has closeness 0."""
        g = RelationGraph.from_edges(3, [(0, 1, 1.0)], WeightSemantics.DISSIMILARITY)
        values = closeness_centrality(g).values
        assert values[2] == 0.0
        assert values[0] == 1.0

    def test_zero_cost_neighbors_are_infinitely_close(self):
        """Test that weight-1 similarity edges under one_minus_weight give infinite closeness."""
        g = RelationGraph.from_edges(6, [(0, 1, 1.0), (0, 2, 1.0), (3, 4, 0.5)], WeightSemantics.SIMILARITY)
        values = closeness_centrality(g, PathCost.ONE_MINUS_WEIGHT).values
        assert np.isposinf(values[:3]).all()
        assert values[3:5].tolist() == pytest.approx([2.0, 2.0])
        assert values[5] == 0.0

    @pytest.mark.parametrize("seed", range(50))
    @pytest.mark.parametrize("cost", [PathCost.HOP, PathCost.WEIGHT])
    def test_matches_networkx(self, seed, cost):
        """Test closeness per component against networkx without the reach correction."""
        g, G = random_graph_pair(seed)
        values = closeness_centrality(g, cost).values
        distance = "weight" if cost == PathCost.WEIGHT else None
        expected = nx.closeness_centrality(G, distance=distance, wf_improved=False)
        assert np.allclose(values, [expected[v] for v in range(g.n_vertices)], atol=1e-9)


class TestBetweenness:
    """Test Brandes betweenness."""

    def test_star_center(self, star_graph):
        """Test that the star center lies on all C(4, 2) leaf pairs."""
        values = betweenness_centrality(star_graph).values
        assert values.tolist() == [6.0, 0.0, 0.0, 0.0, 0.0]
        assert betweenness_centrality(star_graph, normalized=True).values[0] == pytest.approx(1.0)

    def test_square_splits_paths(self):
        """Test that two shortest paths share a pair's credit."""
        g = RelationGraph.from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)],
                                     WeightSemantics.DISSIMILARITY)
        assert np.allclose(betweenness_centrality(g).values, 0.5)

    @pytest.mark.parametrize("seed", range(50))
    @pytest.mark.parametrize("cost", [PathCost.HOP, PathCost.WEIGHT])
    def test_matches_networkx(self, seed, cost):
        """Test against networkx, with integer weights so equal-length paths occur."""
        g, G = random_graph_pair(seed, integer_weights=True)
        values = betweenness_centrality(g, cost).values
        weight = "weight" if cost == PathCost.WEIGHT else None
        expected = nx.betweenness_centrality(G, weight=weight, normalized=False)
        assert np.allclose(values, [expected[v] for v in range(g.n_vertices)], atol=1e-9)

    @pytest.mark.parametrize("seed", range(10))
    def test_normalized_matches_networkx(self, seed):
        """Test the normalized variant against networkx."""
        g, G = random_graph_pair(seed)
        values = betweenness_centrality(g, normalized=True).values
        expected = nx.betweenness_centrality(G, normalized=True)
        assert np.allclose(values, [expected[v] for v in range(g.n_vertices)], atol=1e-9)

    def test_dispatch(self, path_graph):
        """Test the centrality dispatcher."""
        assert centrality(path_graph, CentralityKind.BETWEENNESS).kind == CentralityKind.BETWEENNESS
        assert len(centrality(path_graph, CentralityKind.CLOSENESS)) == 5
