"""
Unit tests for Erdős–Rényi graphs, the linear data generator and Hamming distance
"""

import numpy as np
import pytest
from pydantic import ValidationError

from dcorgraph.core.estimator import dcor_matrix
from dcorgraph.core.thresholding import Adjacency
from dcorgraph.simulation.random_graphs import (
    ErdosRenyiSpec,
    LinearDataSpec,
    erdos_renyi,
    hamming_distance,
    random_baseline_hamming,
    sample_linear_data,
)
from dcorgraph.utils.exceptions import DimensionMismatchError


class TestSpecs:

    def test_probability_above_one(self):
        with pytest.raises(ValidationError):
            ErdosRenyiSpec(p=5, c=6, seed=1)

    def test_seed_range(self):
        with pytest.raises(ValidationError):
            ErdosRenyiSpec(p=5, c=2, seed=-1)
        with pytest.raises(ValidationError):
            ErdosRenyiSpec(p=5, c=2, seed=2 ** 64)

    def test_coefficient_bounds(self):
        with pytest.raises(ValidationError):
            LinearDataSpec(n=10, coef_low=0.9, coef_high=0.3, seed=1)

    def test_defaults(self):
        spec = LinearDataSpec(n=10, seed=3)
        assert (spec.coef_low, spec.coef_high, spec.noise_sd, spec.noise) == (0.3, 0.9, 1.0, "gaussian")


class TestErdosRenyi:

    def test_probability_one_is_complete(self):
        for seed in range(5):
            assert erdos_renyi(ErdosRenyiSpec(p=6, c=6, seed=seed)) == Adjacency.complete(6)

    def test_deterministic(self):
        spec = ErdosRenyiSpec(p=200, c=4, seed=99)
        assert erdos_renyi(spec) == erdos_renyi(spec)

    def test_seeds_differ(self):
        a = erdos_renyi(ErdosRenyiSpec(p=50, c=3, seed=1))
        b = erdos_renyi(ErdosRenyiSpec(p=50, c=3, seed=2))
        assert a != b

    @pytest.mark.slow
    def test_mean_edge_count(self):
        counts = [erdos_renyi(ErdosRenyiSpec(p=50, c=3, seed=s)).edge_count for s in range(200)]
        pairs = 50 * 49 / 2
        q = 3 / 50
        sigma = np.sqrt(pairs * q * (1 - q) / 200)
        assert abs(np.mean(counts) - 75.0) < 3 * sigma


class TestLinearData:

    def test_shape_and_standardization(self):
        g = erdos_renyi(ErdosRenyiSpec(p=8, c=2, seed=4))
        data = sample_linear_data(g, LinearDataSpec(n=300, seed=4))
        assert (data.n, data.p) == (300, 8)
        np.testing.assert_allclose(data.values.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(data.values.std(axis=0, ddof=1), 1.0, atol=1e-12)

    def test_deterministic(self):
        g = erdos_renyi(ErdosRenyiSpec(p=10, c=3, seed=5))
        spec = LinearDataSpec(n=100, seed=5, noise="uniform")
        assert np.array_equal(sample_linear_data(g, spec).values, sample_linear_data(g, spec).values)

    @pytest.mark.slow
    def test_empty_graph_gives_independent_columns(self):
        values = []
        for seed in range(30):
            data = sample_linear_data(Adjacency.empty(4), LinearDataSpec(n=500, seed=seed))
            r = dcor_matrix(data).entries
            values.append(r[np.triu_indices(4, 1)].mean())
        assert np.mean(values) < 0.15

    @pytest.mark.slow
    def test_linked_pair_dominates(self):
        g = Adjacency.from_edge_list(3, [(0, 2)])
        wins = 0
        for seed in range(30):
            r = dcor_matrix(sample_linear_data(g, LinearDataSpec(n=500, seed=seed))).entries
            wins += r[0, 2] > max(r[0, 1], r[1, 2])
        assert wins > 15


class TestHamming:

    def test_identical(self):
        g = erdos_renyi(ErdosRenyiSpec(p=12, c=3, seed=8))
        assert hamming_distance(g, g) == 0

    def test_complete_vs_empty(self):
        assert hamming_distance(Adjacency.complete(7), Adjacency.empty(7)) == 21

    def test_single_disagreement(self):
        a = Adjacency.from_edge_list(3, [(0, 1)])
        b = Adjacency.from_edge_list(3, [(0, 1), (1, 2)])
        assert hamming_distance(a, b) == 1

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            hamming_distance(Adjacency.empty(3), Adjacency.empty(4))

    def test_metric_properties(self):
        graphs = [erdos_renyi(ErdosRenyiSpec(p=10, c=3, seed=s)) for s in range(12)]
        for a, b, c in zip(graphs, graphs[1:], graphs[2:]):
            assert hamming_distance(a, b) == hamming_distance(b, a)
            assert hamming_distance(a, c) <= hamming_distance(a, b) + hamming_distance(b, c)
            assert (hamming_distance(a, b) == 0) == (a == b)

    def test_random_baseline(self):
        assert random_baseline_hamming(4, 0) == 0.0
        assert random_baseline_hamming(4, 6) == 0.0
        assert random_baseline_hamming(4, 3) == pytest.approx(3.0)
