import numpy as np
import pytest

from netsil.errors import ConfigurationError, DegenerateInputError
from netsil.graph import (
    ClusterAssignment,
    DistanceMatrix,
    PointCloud,
    WeightedGraph,
    adjacency_from_points,
    distance_from_adjacency,
    generate_rings,
    read_edge_list,
    write_edge_list,
)


def graph_from_upper(n, entries):
    w = np.zeros((n, n))
    for (i, j), v in entries.items():
        w[i, j] = w[j, i] = v
    return WeightedGraph(w)


class TestWeightedGraph:
    def test_rejects_asymmetry(self):
        w = np.zeros((2, 2))
        w[0, 1] = 0.5
        with pytest.raises(ConfigurationError):
            WeightedGraph(w)

    def test_rejects_self_loops(self):
        w = np.eye(3) * 0.2
        with pytest.raises(ConfigurationError):
            WeightedGraph(w)

    def test_rejects_out_of_range_weights(self):
        w = np.zeros((2, 2))
        w[0, 1] = w[1, 0] = 1.5
        with pytest.raises(ConfigurationError):
            WeightedGraph(w)

    def test_immutable_after_construction(self):
        g = graph_from_upper(2, {(0, 1): 0.3})
        with pytest.raises(ValueError):
            g.weights[0, 1] = 0.9

    def test_edge_count_and_strengths(self):
        g = graph_from_upper(3, {(0, 1): 0.5, (1, 2): 0.25})
        assert g.edge_count() == 2
        assert np.allclose(g.strengths(), [0.5, 0.75, 0.25])


class TestClusterAssignment:
    def test_rejects_unused_cluster_index(self):
        with pytest.raises(ConfigurationError):
            ClusterAssignment(np.array([0, 0, 2]), k=3)

    def test_sizes(self):
        z = ClusterAssignment(np.array([0, 1, 1, 2]), k=3)
        assert z.sizes().tolist() == [1, 2, 1]


class TestDistanceFromAdjacency:
    def test_maximal_similarity_gives_zero_distance(self):
        g = graph_from_upper(2, {(0, 1): 1.0})
        assert distance_from_adjacency(g).dist[0, 1] == 0.0

    def test_absent_edge_gives_maximal_distance(self):
        g = graph_from_upper(2, {})
        d = distance_from_adjacency(g)
        assert d.dist[0, 1] == 1.0
        assert d.dist[0, 0] == 0.0

    def test_elementwise_complement(self):
        g = graph_from_upper(3, {(0, 1): 0.5, (0, 2): 0.2, (1, 2): 0.0})
        d = distance_from_adjacency(g).dist
        assert d[0, 1] == 0.5
        assert d[0, 2] == pytest.approx(0.8)
        assert d[1, 2] == 1.0

    def test_complement_involution_recovers_weights(self):
        rng = np.random.default_rng(3)
        w = np.triu(rng.uniform(0, 1, (12, 12)), k=1)
        g = WeightedGraph(w + w.T)
        d = distance_from_adjacency(g).dist
        back = 1.0 - d
        np.fill_diagonal(back, 0.0)
        assert np.array_equal(back, g.weights)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(4)
        w = np.triu(rng.uniform(0, 1, (9, 9)), k=1)
        g = WeightedGraph(w + w.T)
        perm = rng.permutation(9)
        gp = WeightedGraph(g.weights[np.ix_(perm, perm)])
        d = distance_from_adjacency(g).dist
        dp = distance_from_adjacency(gp).dist
        assert np.array_equal(dp, d[np.ix_(perm, perm)])


class TestGenerateRings:
    def test_paper_configuration_has_600_points_on_exact_radii(self):
        pc = generate_rings((200, 200, 200), (1.0, 2.0, 3.0), seed=7)
        assert pc.n == 600
        norms = np.linalg.norm(pc.points, axis=1)
        expected = np.array([1.0, 2.0, 3.0])[pc.labels]
        assert np.allclose(norms, expected, rtol=0, atol=1e-12)

    def test_single_point_at_origin(self):
        pc = generate_rings((1,), (0.0,), seed=1)
        assert pc.n == 1
        assert np.allclose(pc.points, 0.0)

    def test_same_seed_is_bitwise_identical(self):
        a = generate_rings((50, 30), (1.0, 2.5), seed=11)
        b = generate_rings((50, 30), (1.0, 2.5), seed=11)
        assert np.array_equal(a.points, b.points)
        assert np.array_equal(a.labels, b.labels)

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ConfigurationError):
            generate_rings((10, 10), (1.0,), seed=0)


class TestAdjacencyFromPoints:
    def test_two_points_have_zero_range(self):
        pc = PointCloud(np.array([[0.0, 0.0], [1.0, 0.0]]), np.array([0, 0]))
        with pytest.raises(DegenerateInputError):
            adjacency_from_points(pc)

    def test_three_collinear_points(self):
        pc = PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]), np.zeros(3, dtype=int))
        g = adjacency_from_points(pc)
        assert g.weights[0, 1] == 1.0
        assert g.weights[1, 2] == 1.0
        assert g.weights[0, 2] == 0.0

    def test_ring_cloud_satisfies_graph_invariants(self):
        pc = generate_rings((40, 40, 40), (1.0, 2.0, 3.0), seed=7)
        g = adjacency_from_points(pc)  # WeightedGraph validates on construction
        assert g.n == 120

    def test_extreme_weights_attained(self):
        rng = np.random.default_rng(5)
        pc = PointCloud(rng.normal(size=(30, 2)), np.zeros(30, dtype=int))
        g = adjacency_from_points(pc)
        off = g.weights[np.triu_indices(30, k=1)]
        assert off.max() == 1.0
        assert off.min() == 0.0


class TestEdgeListIO:
    def test_round_trip(self, tmp_path):
        g = graph_from_upper(3, {(0, 1): 0.5, (1, 2): 0.125})
        path = tmp_path / "g.tsv"
        write_edge_list(g, path)
        back = read_edge_list(path)
        assert back.node_ids == ("0", "1", "2")
        assert np.array_equal(back.weights, g.weights)

    def test_comments_and_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("# header\n\na\tb\t0.5\n", encoding="utf-8")
        g = read_edge_list(path)
        assert g.n == 2
        assert g.weights[0, 1] == 0.5

    def test_duplicate_edge_reports_line(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("a\tb\t0.5\nb\ta\t0.25\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match=":2:"):
            read_edge_list(path)

    def test_malformed_line_reports_line(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("a b 0.5\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match=":1:"):
            read_edge_list(path)
