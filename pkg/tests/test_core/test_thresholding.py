"""
Unit tests for graph thresholding and the Adjacency type
"""

import numpy as np
import pytest

from dcorgraph.core.matrices import PartialCorrMatrix
from dcorgraph.core.thresholding import (
    Adjacency,
    auto_thresholds,
    estimation_path,
    threshold_for_edge_count,
    threshold_graph,
)
from dcorgraph.utils.exceptions import InvalidInputError


def symmetric_scores(rng, p):
    m = rng.uniform(-1.0, 1.0, (p, p))
    m = (m + m.T) / 2.0
    np.fill_diagonal(m, 0.0)
    return m


class TestAdjacency:

    def test_rejects_self_loops(self):
        with pytest.raises(InvalidInputError, match="self-loops"):
            Adjacency(np.eye(3, dtype=bool))

    def test_rejects_asymmetry(self):
        edges = np.zeros((3, 3), dtype=bool)
        edges[0, 1] = True
        with pytest.raises(InvalidInputError, match="symmetric"):
            Adjacency(edges)

    def test_edge_list_is_lexicographic(self):
        g = Adjacency.from_edge_list(5, [(3, 1), (0, 4), (0, 2), (2, 3)])
        assert g.edge_list() == [(0, 2), (0, 4), (1, 3), (2, 3)]
        assert g.edge_count == 4

    def test_from_edge_list_bounds(self):
        with pytest.raises(InvalidInputError):
            Adjacency.from_edge_list(3, [(0, 3)])
        with pytest.raises(InvalidInputError):
            Adjacency.from_edge_list(3, [(1, 1)])

    def test_immutable(self):
        g = Adjacency.complete(3)
        with pytest.raises(ValueError):
            g.edges[0, 1] = False

    def test_to_networkx_labels(self):
        graph = Adjacency.from_edge_list(3, [(0, 2)]).to_networkx(["a", "b", "c"])
        assert sorted(graph.nodes) == [0, 1, 2]
        assert graph.nodes[2]["label"] == "c"
        assert list(graph.edges) == [(0, 2)]


class TestThresholdGraph:

    def test_zero_threshold_complete(self, rng):
        pc = PartialCorrMatrix(entries=symmetric_scores(rng, 6))
        assert threshold_graph(pc, 0.0) == Adjacency.complete(6)

    def test_threshold_above_max_empty(self, rng):
        scores = symmetric_scores(rng, 6)
        assert threshold_graph(scores, float(np.abs(scores).max())).edge_count == 0

    def test_strict_comparison(self):
        scores = np.array([
            [0.0, 0.9, -0.2],
            [0.9, 0.0, -0.9],
            [-0.2, -0.9, 0.0],
        ])
        g = threshold_graph(scores, 0.5)
        assert g.edge_list() == [(0, 1), (1, 2)]
        assert threshold_graph(scores, 0.9).edge_count == 0

    def test_negative_threshold(self):
        with pytest.raises(InvalidInputError):
            threshold_graph(np.zeros((2, 2)), -0.1)


class TestThresholdForEdgeCount:

    def test_bounds(self, rng):
        scores = symmetric_scores(rng, 5)
        tp, g = threshold_for_edge_count(scores, 0)
        assert g.edge_count == 0
        assert tp == pytest.approx(float(np.abs(scores).max()))
        assert threshold_for_edge_count(scores, 10)[1] == Adjacency.complete(5)

    def test_out_of_range(self, rng):
        with pytest.raises(InvalidInputError):
            threshold_for_edge_count(symmetric_scores(rng, 4), 7)
        with pytest.raises(InvalidInputError):
            threshold_for_edge_count(symmetric_scores(rng, 4), -1)

    def test_matches_sort_oracle(self, rng):
        scores = symmetric_scores(rng, 7)
        pairs = [(i, j) for i in range(7) for j in range(i + 1, 7)]
        expected = sorted(pairs, key=lambda ij: -abs(scores[ij]))[:3]

        tp, g = threshold_for_edge_count(scores, 3)
        assert g.edge_list() == sorted(expected)
        assert tp == abs(scores[expected[-1]])

    def test_ties_break_lexicographically(self):
        scores = np.full((4, 4), 0.5)
        np.fill_diagonal(scores, 0.0)
        _, g = threshold_for_edge_count(scores, 2)
        assert g.edge_list() == [(0, 1), (0, 2)]


class TestEstimationPath:

    def test_single_threshold(self, rng):
        scores = symmetric_scores(rng, 5)
        path = estimation_path(scores, [0.3])
        assert path.graphs == (threshold_graph(scores, 0.3),)

    def test_nested(self, rng):
        path = estimation_path(symmetric_scores(rng, 8), [0.8, 0.4, 0.0])
        counts = list(path.edge_counts)
        assert counts == sorted(counts)
        for smaller, larger in zip(path.graphs, path.graphs[1:]):
            assert not np.any(smaller.edges & ~larger.edges)

    def test_forty_thresholds(self, rng):
        scores = symmetric_scores(rng, 6)
        thresholds = list(np.linspace(float(np.abs(scores).max()), 0.0, 40))
        path = estimation_path(scores, thresholds)
        for t, g in zip(thresholds, path.graphs):
            assert g == threshold_graph(scores, t)

    @pytest.mark.parametrize("thresholds", [[], [0.2, 0.4], [0.3, 0.3], [0.5, -0.1]])
    def test_invalid_sequences(self, thresholds):
        with pytest.raises(InvalidInputError):
            estimation_path(np.zeros((3, 3)), thresholds)


class TestAutoThresholds:

    def test_geometric_range(self, rng):
        scores = symmetric_scores(rng, 5)
        top = float(np.abs(scores).max())
        values = auto_thresholds(scores, count=40, min_ratio=0.05)
        assert len(values) == 40
        assert values[0] == pytest.approx(top)
        assert values[-1] == pytest.approx(0.05 * top)
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_all_zero(self):
        with pytest.raises(InvalidInputError):
            auto_thresholds(np.eye(3))
