"""
Unit tests for the distance-correlation matrix, inversion and partial correlations
"""

import math

import numpy as np
import pytest

from dcorgraph.config import EstimatorConfig
from dcorgraph.core.dataset import Dataset
from dcorgraph.core.dcor import dcor, dcor_fast
from dcorgraph.core.estimator import (
    GraphEstimator,
    dcor_matrix,
    invert,
    is_singular,
    log_det,
    partial_correlations,
)
from dcorgraph.core.matrices import InverseResult
from dcorgraph.core.thresholding import threshold_graph
from dcorgraph.utils.exceptions import ConfigurationError, InvalidInputError, SingularMatrixError


def random_correlation(rng, p):
    a = rng.standard_normal((p, 2 * p))
    s = a @ a.T
    d = 1.0 / np.sqrt(np.diag(s))
    return s * np.outer(d, d)


def residual_partial(r, i, j):
    """Partial correlation of i and j from the covariance of their regression residuals"""
    rest = [k for k in range(r.shape[0]) if k not in (i, j)]
    pair = [i, j]
    cond = r[np.ix_(pair, pair)] - r[np.ix_(pair, rest)] @ np.linalg.solve(r[np.ix_(rest, rest)], r[np.ix_(rest, pair)])
    return cond[0, 1] / math.sqrt(cond[0, 0] * cond[1, 1])


class TestDCorMatrix:

    def test_identical_columns(self, rng):
        x = rng.standard_normal(50)
        r = dcor_matrix(Dataset(np.column_stack([x, x])))
        np.testing.assert_allclose(r.entries, np.ones((2, 2)), atol=1e-12)

    def test_matches_pairwise_dcor(self, rng):
        values = rng.standard_normal((60, 5))
        values[:, 1] += values[:, 0] ** 2
        r = dcor_matrix(Dataset(values))

        assert np.array_equal(r.entries, r.entries.T)
        np.testing.assert_array_equal(np.diag(r.entries), 1.0)
        for i in range(5):
            for j in range(i + 1, 5):
                assert r.entries[i, j] == dcor_fast(values[:, i], values[:, j]).dcor
                assert r.entries[i, j] == pytest.approx(dcor(values[:, i], values[:, j]).dcor, abs=1e-10)

    def test_threads_do_not_change_result(self, rng):
        data = Dataset(rng.standard_normal((80, 7)))
        assert np.array_equal(dcor_matrix(data, n_jobs=1).entries, dcor_matrix(data, n_jobs=4).entries)

    def test_constant_column_warns(self, rng, caplog):
        values = rng.standard_normal((30, 3))
        values[:, 1] = 7.0
        r = dcor_matrix(Dataset(values, ["a", "flat", "c"]))

        assert r.entries[0, 1] == 0.0 and r.entries[1, 2] == 0.0
        assert r.entries[1, 1] == 1.0
        assert any("'flat'" in w for w in r.warnings)
        assert "'flat'" in caplog.text

    @pytest.mark.slow
    def test_independent_columns_have_small_dcor(self):
        for seed in range(50):
            data = Dataset(np.random.default_rng(seed).standard_normal((1000, 3)))
            r = dcor_matrix(data)
            assert np.all(r.entries[np.triu_indices(3, 1)] < 0.2)


class TestInvert:

    def test_identity(self):
        result = invert(np.eye(4))
        np.testing.assert_allclose(result.inverse, np.eye(4))
        assert result.ridge_applied == 0.0

    def test_two_by_two(self):
        result = invert(np.array([[1.0, 0.5], [0.5, 1.0]]))
        np.testing.assert_allclose(result.inverse, [[4 / 3, -2 / 3], [-2 / 3, 4 / 3]], atol=1e-12)
        assert result.ridge_applied == 0.0

    def test_wide_data(self, rng):
        r = dcor_matrix(Dataset(rng.standard_normal((10, 20))))
        result = invert(r)
        assert np.all(np.isfinite(result.inverse))
        ridged = r.entries + result.ridge_applied * np.eye(20)
        np.testing.assert_allclose(ridged @ result.inverse, np.eye(20), atol=1e-6)

    def test_ridge_fallback(self):
        singular = np.ones((3, 3))
        result = invert(singular, ridge_step=1e-8, max_ridge=1e-2)
        assert result.ridge_applied > 0.0
        assert result.ridge_applied <= 1e-2
        np.testing.assert_allclose(result.inverse, result.inverse.T)

    def test_singular_beyond_ridge(self):
        with pytest.raises(SingularMatrixError) as info:
            invert(np.full((2, 2), 1e12), ridge_step=1e-8, max_ridge=1e-6)
        assert info.value.smallest_pivot == 0.0
        assert info.value.exit_code == 3

    def test_bad_ridge_order(self):
        with pytest.raises(InvalidInputError):
            invert(np.eye(2), ridge_step=1e-2, max_ridge=1e-8)

    def test_not_square(self):
        with pytest.raises(InvalidInputError):
            invert(np.ones((2, 3)))


class TestPartialCorrelations:

    def test_identity(self):
        pc = partial_correlations(np.eye(3))
        assert not pc.entries.any()

    @pytest.mark.parametrize("r", [0.0, 0.3, -0.75, 0.99])
    def test_two_variables_equal_marginal(self, r):
        pc = partial_correlations(invert(np.array([[1.0, r], [r, 1.0]])))
        assert pc.entries[0, 1] == pytest.approx(r, abs=1e-12)
        assert pc.entries[0, 0] == 0.0

    def test_residual_oracle(self, rng):
        for p in [4] * 50 + [6] * 50:
            r = random_correlation(rng, p)
            pc = partial_correlations(invert(r)).entries
            for i in range(p):
                for j in range(i + 1, p):
                    assert pc[i, j] == pytest.approx(residual_partial(r, i, j), abs=1e-8)
            assert np.array_equal(pc, pc.T)

    def test_sign_opposes_inverse(self, rng):
        inverse = invert(random_correlation(rng, 6))
        pc = partial_correlations(inverse).entries
        off = ~np.eye(6, dtype=bool)
        assert np.all(np.sign(pc[off]) == -np.sign(inverse.inverse[off]))

    def test_carries_ridge(self):
        pc = partial_correlations(InverseResult(inverse=np.eye(2), ridge_applied=1e-4))
        assert pc.ridge_applied == 1e-4

    def test_nonpositive_diagonal(self):
        with pytest.raises(InvalidInputError, match="index 1"):
            partial_correlations(np.array([[1.0, 0.0], [0.0, -2.0]]))

    def test_asymmetric(self):
        with pytest.raises(InvalidInputError, match="symmetric"):
            partial_correlations(np.array([[1.0, 0.5], [0.1, 1.0]]))


class TestLogDet:

    def test_identity(self):
        assert log_det(np.eye(5)) == 0.0

    def test_diagonal(self):
        assert log_det(np.diag([2.0, 3.0])) == pytest.approx(math.log(6.0))

    def test_rank_deficient_pearson(self, rng):
        data = rng.standard_normal((10, 20))
        assert is_singular(log_det(np.corrcoef(data, rowvar=False)))

    def test_tiny_determinant(self):
        assert is_singular(log_det(np.diag([1e-200, 1e-200])))

    def test_negative_determinant_uses_magnitude(self):
        assert log_det(np.array([[0.0, 2.0], [3.0, 0.0]])) == pytest.approx(math.log(6.0))

    def test_not_square(self):
        with pytest.raises(InvalidInputError):
            log_det(np.ones((2, 3)))


class TestGraphEstimator:

    def test_requires_one_rule(self, rng):
        data = Dataset(rng.standard_normal((20, 3)))
        estimator = GraphEstimator()
        with pytest.raises(ConfigurationError):
            estimator.estimate(data)
        with pytest.raises(ConfigurationError):
            estimator.estimate(data, tp=0.1, edges=2)

    def test_edge_count(self, rng):
        result = GraphEstimator().estimate(Dataset(rng.standard_normal((50, 6))), edges=4)
        assert result.graph.edge_count == 4
        assert result.threshold_source == "partial"
        assert result.ridge_applied == 0.0

    def test_dcor_source_complete_at_zero(self, rng):
        data = Dataset(rng.standard_normal((40, 5)))
        result = GraphEstimator(EstimatorConfig(threshold_matrix="dcor")).estimate(data, tp=0.0)
        assert result.graph.edge_count == 10

    def test_column_permutation_equivariance(self, rng):
        values = rng.standard_normal((60, 6))
        values[:, 1] += 0.8 * values[:, 0]
        values[:, 4] += np.abs(values[:, 3])
        perm = rng.permutation(6)

        base = GraphEstimator().estimate(Dataset(values), tp=0.1)
        shuffled = GraphEstimator().estimate(Dataset(values[:, perm]), tp=0.1)

        reorder = np.ix_(perm, perm)
        np.testing.assert_allclose(shuffled.dcor.entries, base.dcor.entries[reorder], atol=1e-12)
        np.testing.assert_allclose(shuffled.partial.entries, base.partial.entries[reorder], atol=1e-10)
        assert np.array_equal(shuffled.graph.edges, base.graph.edges[reorder])

    def test_fixed_threshold_matches_stage_functions(self, rng):
        data = Dataset(rng.standard_normal((40, 5)))
        result = GraphEstimator().estimate(data, tp=0.05)
        expected = threshold_graph(partial_correlations(invert(dcor_matrix(data))), 0.05)
        assert result.graph == expected

    def test_auto_path(self, rng):
        data = Dataset(rng.standard_normal((40, 5)))
        result = GraphEstimator(EstimatorConfig(path_count=10)).estimate(data, thresholds="auto")
        assert len(result.path.thresholds) == 10
        assert result.graph is None
        assert list(result.path.edge_counts) == sorted(result.path.edge_counts)

    def test_unknown_sequence(self, rng):
        with pytest.raises(ConfigurationError):
            GraphEstimator().estimate(Dataset(rng.standard_normal((20, 3))), thresholds="dense")
