import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contour_harmonics.contours import Structure
from contour_harmonics.errors import ColumnMismatch, EmptyMatrix
from contour_harmonics.features import (
    FeatureMatrix,
    OrderSpec,
    assemble_matrix,
    surprisal_target,
)
from contour_harmonics.fitting import (
    FitResult,
    lasso_fit,
    mse,
    ols_fit,
    predict,
    select_and_refit,
)
from contour_harmonics.synthetic import SyntheticSpec, generate_synthetic

from oracles import normal_equations_ols


def matrix(values, names=None):
    values = np.asarray(values, dtype=float)
    if names is None:
        names = tuple(f"x{j}" for j in range(values.shape[1]))
    return FeatureMatrix(values, tuple(names))


class TestOls:
    def test_intercept_only(self):
        X = matrix([[1.0], [1.0], [1.0]], ("intercept",))
        fit = ols_fit(X, np.array([3.0, 3.0, 3.0]))
        assert fit.coefficients[0] == pytest.approx(3.0, abs=1e-12)
        assert fit.rss == pytest.approx(0.0, abs=1e-20)

    def test_line_fit(self):
        X = matrix([[1, 0], [1, 1], [1, 2]], ("intercept", "slope"))
        y = np.array([1.0, 2.0, 4.0])
        fit = ols_fit(X, y)
        # 5/6 and 3/2 from the normal equations
        assert fit.coefficients == pytest.approx([0.8333333333333334, 1.5], abs=1e-10)
        assert fit.rss == pytest.approx(1 / 6, abs=1e-12)
        np.testing.assert_allclose(
            fit.coefficients, normal_equations_ols(X.values, y), atol=1e-10
        )

    def test_duplicated_column_minimum_norm(self):
        X = matrix([[1, 1], [2, 2]])
        fit = ols_fit(X, np.array([2.0, 4.0]))
        assert fit.coefficients == pytest.approx([1.0, 1.0], abs=1e-10)
        assert fit.rss == pytest.approx(0.0, abs=1e-18)
        assert fit.n_params_effective == 1

    def test_empty_matrix(self):
        X = matrix(np.empty((0, 2)))
        with pytest.raises(EmptyMatrix):
            ols_fit(X, np.empty(0))

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_matches_normal_equations(self, seed):
        rng = np.random.default_rng(seed)
        X = matrix(rng.normal(size=(40, 6)))
        y = rng.normal(size=40)
        fit = ols_fit(X, y)
        expected = normal_equations_ols(X.values, y)
        np.testing.assert_allclose(fit.coefficients, expected, rtol=1e-8)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_residual_orthogonality(self, seed):
        rng = np.random.default_rng(seed)
        X = matrix(rng.normal(size=(50, 5)))
        y = rng.normal(size=50)
        fit = ols_fit(X, y)
        resid = y - X.values @ fit.coefficients
        for j in range(5):
            col = X.values[:, j]
            bound = 1e-6 * np.linalg.norm(col) * max(np.linalg.norm(resid), 1e-30)
            assert abs(col @ resid) <= bound

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_nested_model_rss_monotone(self, seed):
        rng = np.random.default_rng(seed)
        values = rng.normal(size=(30, 6))
        y = rng.normal(size=30)
        small = ols_fit(matrix(values[:, :4]), y)
        big = ols_fit(matrix(values), y)
        assert big.rss <= small.rss + 1e-9


class TestLasso:
    def test_zero_penalty_equals_ols(self, rng):
        X = matrix(
            np.column_stack([np.ones(30), rng.normal(size=(30, 4))]),
            ("intercept", "a", "b", "c", "d"),
        )
        y = rng.normal(size=30)
        lasso = lasso_fit(X, y, lam=0.0)
        ols = ols_fit(X, y)
        np.testing.assert_allclose(lasso.coefficients, ols.coefficients, atol=1e-6)
        assert lasso.converged

    def test_soft_threshold_on_unit_scaled_column(self):
        X = matrix(
            np.column_stack([np.ones(4), [1.0, -1.0, 1.0, -1.0]]),
            ("intercept", "z"),
        )
        y = np.array([2.0, -2.0, 2.0, -2.0])
        fit = lasso_fit(X, y, lam=0.01)
        assert fit.coefficient("z") == pytest.approx(1.99, abs=1e-8)
        assert fit.coefficient("intercept") == pytest.approx(0.0, abs=1e-8)

    def test_full_shrinkage_at_lambda_max(self, rng):
        values = np.column_stack([np.ones(50), rng.normal(size=(50, 5))])
        X = matrix(values, ("intercept", "a", "b", "c", "d", "e"))
        y = rng.normal(size=50) + 3.0
        centered = y - y.mean()
        lam_max = max(
            abs(values[:, j] @ centered) / 50 for j in range(1, 6)
        )
        fit = lasso_fit(X, y, lam=lam_max * 1.0001)
        assert all(
            fit.coefficient(name) == 0.0 for name in ("a", "b", "c", "d", "e")
        )
        assert fit.coefficient("intercept") == pytest.approx(y.mean(), abs=1e-8)

    def test_exact_zeros(self, rng):
        X = matrix(
            np.column_stack([np.ones(40), rng.normal(size=(40, 6))]),
            ("intercept", *"abcdef"),
        )
        y = rng.normal(size=40)
        fit = lasso_fit(X, y, lam=0.5)
        assert 0.0 in set(fit.coefficients[1:])  # something was thresholded

    def test_objective_non_increasing(self, rng):
        X = matrix(np.column_stack([np.ones(60), rng.normal(size=(60, 8))]))
        y = rng.normal(size=60)
        fit = lasso_fit(X, y, lam=0.01)
        path = np.array(fit.objective_path)
        assert len(path) >= 1
        diffs = np.diff(path)
        assert np.all(diffs <= 1e-12 * (1 + np.abs(path[:-1])))

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=20, deadline=None)
    def test_orthonormal_soft_threshold_closed_form(self, seed):
        rng = np.random.default_rng(seed)
        n, p = 32, 6
        q, _ = np.linalg.qr(rng.normal(size=(n, p)))
        values = q * math.sqrt(n)  # (1/n) * ||col||^2 == 1
        y = rng.normal(size=n)
        lam = 0.05
        fit = lasso_fit(matrix(values), y, lam=lam)
        rho = values.T @ y / n
        expected = np.sign(rho) * np.maximum(np.abs(rho) - lam, 0.0)
        np.testing.assert_allclose(fit.coefficients, expected, atol=1e-6)

    def test_negative_lambda_rejected(self):
        with pytest.raises(ValueError):
            lasso_fit(matrix([[1.0]]), np.array([1.0]), lam=-0.1)

    def test_sweep_budget_flags_non_convergence(self, rng, monkeypatch):
        import contour_harmonics.fitting as fitting

        monkeypatch.setattr(fitting, "CD_MAX_SWEEPS", 1)
        X = matrix(np.column_stack([np.ones(30), rng.normal(size=(30, 4))]))
        fit = lasso_fit(X, rng.normal(size=30), lam=0.001)
        assert not fit.converged
        assert len(fit.objective_path) == 1


class TestSelectAndRefit:
    def _baseline_docs(self):
        spec = SyntheticSpec(
            n_docs=8,
            edus_per_doc=(4, 6),
            tokens_per_edu=(5, 9),
            amplitudes={},
            noise_sd=0.0,
            seed=3,
        )
        return generate_synthetic(spec)

    def test_empty_harmonic_selection_equals_baseline_ols(self):
        docs = self._baseline_docs()
        orders = OrderSpec({Structure.EDU: 5})
        X = assemble_matrix(docs, {"baseline", "edu"}, orders)
        y = surprisal_target(docs)  # constant: everything but intercept shrinks
        sel = select_and_refit(X, y, lam=0.01)
        assert all("sin" not in n and "cos" not in n for n in sel.selected)
        base = ols_fit(X.select(sel.selected), y)
        np.testing.assert_allclose(sel.fit.coefficients, base.coefficients)

    def test_recovers_injected_edu_signal(self):
        spec = SyntheticSpec(
            n_docs=40,
            edus_per_doc=(10, 14),
            tokens_per_edu=(8, 16),
            amplitudes={(Structure.EDU, 1): (0.7, 0.0)},
            noise_sd=1.0,
            seed=11,
        )
        docs = generate_synthetic(spec)
        assert sum(d.n_tokens for d in docs) >= 5000
        orders = OrderSpec({Structure.EDU: 16})
        X = assemble_matrix(docs, {"baseline", "edu"}, orders)
        sel = select_and_refit(X, surprisal_target(docs), lam=0.01)
        assert "edu_sin_1" in sel.selected
        assert sel.fit.coefficient("edu_sin_1") == pytest.approx(0.7, abs=0.05)

    def test_duplicate_columns_keep_first(self):
        col = np.array([1.0, 2.0, 3.0, 4.0])
        X = matrix(
            np.column_stack([np.ones(4), col, col.copy()]),
            ("intercept", "first", "second"),
        )
        y = 2 * col + 1
        sel = select_and_refit(X, y, lam=0.001)
        assert "first" in sel.selected
        assert "second" not in sel.selected

    def test_refit_rss_not_above_lasso_rss(self, rng):
        X = matrix(np.column_stack([np.ones(50), rng.normal(size=(50, 8))]))
        y = rng.normal(size=50)
        sel = select_and_refit(X, y, lam=0.02)
        assert sel.fit.rss <= sel.lasso.rss + 1e-9


class TestPredictMse:
    def test_perfect_fit(self):
        X = matrix([[1, 1], [1, 2], [1, 3]], ("intercept", "x"))
        y = np.array([3.0, 5.0, 7.0])
        fit = ols_fit(X, y)
        assert mse(fit, X, y) == pytest.approx(0.0, abs=1e-18)

    def test_intercept_only_gives_variance(self):
        y = np.array([1.0, 2.0, 6.0, 3.0])
        X = matrix(np.ones((4, 1)), ("intercept",))
        fit = ols_fit(X, y)
        assert mse(fit, X, y) == pytest.approx(float(np.var(y)), abs=1e-12)

    def test_hand_case(self):
        X = matrix([[1.0], [1.0]], ("intercept",))
        fit = FitResult(
            coefficients=np.array([2.0]),
            column_names=("intercept",),
            rss=2.0,
            n_rows=2,
            n_params_effective=1,
        )
        y = np.array([1.0, 3.0])
        np.testing.assert_array_equal(predict(fit, X), [2.0, 2.0])
        assert mse(fit, X, y) == pytest.approx(1.0)

    def test_column_mismatch(self):
        fit = ols_fit(matrix([[1.0], [1.0]], ("intercept",)), np.array([1.0, 2.0]))
        with pytest.raises(ColumnMismatch):
            predict(fit, matrix([[1.0, 0.0]], ("intercept", "x")))
