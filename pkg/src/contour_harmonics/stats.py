"""Order-wise ANOVA, amplitudes, cross-validation, and paired comparisons.

Folds are assigned by document (seeded shuffle, round-robin) so a document
never contributes tokens to both sides of a split. Within each fold every
model goes through lasso selection and an OLS refit on the training fold;
harmonic orders that survive selection are tested one-way against the
baseline-features-only model (sin/cos pair, 2 numerator degrees of
freedom).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .contours import ALL_STRUCTURES, DocumentContour, Structure
from .errors import DegenerateDf, NonNested, OutOfRangeP, TooFewDocuments
from .features import (
    BASELINE_BLOCK,
    FeatureMatrix,
    OrderSpec,
    assemble_matrix,
    matrix_column_names,
    orders_from_training,
    parse_harmonic_name,
    surprisal_target,
)
from .fitting import FitResult, mse, ols_fit, select_and_refit

DEFAULT_ALPHA = 0.001
DEFAULT_LAMBDA = 0.01


def amplitude(beta_sin: float, beta_cos: float) -> float:
    """Strength of one frequency component: the norm of its (sin, cos) pair."""
    return math.hypot(beta_sin, beta_cos)


def f_survival(f_stat: float, df_num: int, df_den: int) -> float:
    """P(F >= f_stat) for the F(df_num, df_den) distribution."""
    return float(_scipy_stats.f.sf(f_stat, df_num, df_den))


def t_survival(t_stat: float, df: int) -> float:
    """One-sided P(T >= t_stat) for Student's t with ``df`` degrees of freedom."""
    return float(_scipy_stats.t.sf(t_stat, df))


@dataclass(frozen=True)
class AnovaResult:
    structure: Structure | None
    order: int | None
    f_stat: float
    df_num: int
    df_den: int
    p_value: float
    significant: bool


def anova_order_test(
    baseline_fit: FitResult,
    augmented_fit: FitResult,
    alpha: float = DEFAULT_ALPHA,
) -> AnovaResult:
    """F-test of one harmonic order's sin/cos pair over the baseline fit.

    The augmented fit must share the baseline's rows and extend its columns
    by exactly one order's pair; structure and order are read off the extra
    column names when they follow the harmonic naming grammar.
    """
    rss_b, rss_a = baseline_fit.rss, augmented_fit.rss
    if rss_a > rss_b + 1e-9:
        raise NonNested(
            f"augmented rss {rss_a} exceeds baseline rss {rss_b}"
        )
    n = augmented_fit.n_rows
    p_aug = augmented_fit.n_params_effective
    if n <= p_aug:
        raise DegenerateDf(f"n={n} rows but {p_aug} effective parameters")
    df_den = n - p_aug

    structure: Structure | None = None
    order: int | None = None
    extra = [
        name
        for name in augmented_fit.column_names
        if name not in baseline_fit.column_names
    ]
    parsed = {parse_harmonic_name(name) for name in extra}
    parsed.discard(None)
    keys = {(s, k) for s, _, k in parsed}
    if len(keys) == 1:
        structure, order = keys.pop()

    if rss_a == 0.0:
        f_stat = math.inf
        p_value = 0.0
    else:
        f_stat = max(0.0, (rss_b - rss_a) / 2 / (rss_a / df_den))
        p_value = f_survival(f_stat, 2, df_den)
    return AnovaResult(
        structure=structure,
        order=order,
        f_stat=f_stat,
        df_num=2,
        df_den=df_den,
        p_value=p_value,
        significant=p_value < alpha,
    )


@dataclass(frozen=True)
class PairedTestResult:
    delta_mse_mean: float
    t_stat: float
    one_sided_p: float
    holm_adjusted_p: float | None = None
    degenerate: bool = False


def paired_t_one_sided(
    baseline_mses: Sequence[float], model_mses: Sequence[float]
) -> PairedTestResult:
    """One-sided paired t-test that the model improves on the baseline.

    Differences are baseline - model, so positive t means improvement; the
    p-value is the upper tail. All-identical nonzero differences have no
    sample variance and come back flagged degenerate with p 0 or 1 by sign.
    """
    b = np.asarray(baseline_mses, dtype=float)
    m = np.asarray(model_mses, dtype=float)
    if b.shape != m.shape or b.ndim != 1 or len(b) < 2:
        raise ValueError("need two equal-length vectors of at least 2 folds")
    d = b - m
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    n = len(d)
    if sd == 0.0:
        if mean == 0.0:
            return PairedTestResult(0.0, 0.0, 0.5)
        return PairedTestResult(
            mean,
            math.copysign(math.inf, mean),
            0.0 if mean > 0 else 1.0,
            degenerate=True,
        )
    t_stat = mean / (sd / math.sqrt(n))
    return PairedTestResult(mean, t_stat, t_survival(t_stat, n - 1))


def holm_correction(p_values: Sequence[float]) -> list[float]:
    """Holm-Bonferroni step-down adjustment, order-aligned with the input."""
    p = [float(v) for v in p_values]
    for v in p:
        if not 0.0 <= v <= 1.0:
            raise OutOfRangeP(f"p-value {v} outside [0, 1]")
    m = len(p)
    adjusted = [0.0] * m
    running = 0.0
    for rank, idx in enumerate(np.argsort(p, kind="stable")):
        running = max(running, (m - rank) * p[idx])
        adjusted[idx] = min(1.0, running)
    return adjusted


@dataclass(frozen=True)
class ModelSpec:
    """One regression variant: a named set of feature blocks."""

    name: str
    blocks: frozenset[str]

    @property
    def structures(self) -> tuple[Structure, ...]:
        return tuple(s for s in ALL_STRUCTURES if s.value in self.blocks)


def standard_model_specs(scaled: Sequence[str]) -> list[ModelSpec]:
    """Baseline plus one model per requested scaling, "all" for the maximal."""
    specs = [ModelSpec("baseline", frozenset({BASELINE_BLOCK}))]
    for s in ALL_STRUCTURES:
        if s.value in scaled:
            specs.append(ModelSpec(s.value, frozenset({BASELINE_BLOCK, s.value})))
    if "all" in scaled:
        specs.append(
            ModelSpec(
                "all",
                frozenset({BASELINE_BLOCK, *(s.value for s in ALL_STRUCTURES)}),
            )
        )
    return specs


@dataclass(frozen=True)
class FoldModelResult:
    """Selection, refit, and validation outcome of one model on one fold."""

    model: str
    fold: int
    mse: float
    selected: tuple[str, ...]
    coefficients: Mapping[str, float]
    amplitudes: Mapping[tuple[Structure, int], float]
    anova: Mapping[tuple[Structure, int], AnovaResult]
    lasso_converged: bool


@dataclass(frozen=True)
class SinusoidSummary:
    structure: Structure
    order: int
    mean_amplitude: float
    significant_folds: int


@dataclass(frozen=True)
class CvReport:
    models: tuple[str, ...]
    n_folds: int
    seed: int
    lam: float
    alpha: float
    fold_of_doc: Mapping[str, int]
    orders_per_fold: tuple[OrderSpec, ...]
    results: tuple[FoldModelResult, ...] = field(repr=False)

    def model_results(self, model: str) -> list[FoldModelResult]:
        return sorted(
            (r for r in self.results if r.model == model), key=lambda r: r.fold
        )

    def fold_mses(self, model: str) -> np.ndarray:
        return np.array([r.mse for r in self.model_results(model)])

    def persistent_sinusoids(self, model: str) -> list[tuple[Structure, int]]:
        """Sinusoids selected in every fold of the given model."""
        per_fold = [set(r.amplitudes) for r in self.model_results(model)]
        if not per_fold:
            return []
        common = set.intersection(*per_fold)
        return sorted(common, key=lambda sk: (ALL_STRUCTURES.index(sk[0]), sk[1]))

    def amplitude_summary(self, model: str) -> list[SinusoidSummary]:
        """Fold-mean amplitude and significant-fold count per persistent sinusoid,
        sorted by structure then descending amplitude."""
        records = self.model_results(model)
        rows = []
        for sk in self.persistent_sinusoids(model):
            amps = [r.amplitudes[sk] for r in records]
            sig = sum(1 for r in records if r.anova[sk].significant)
            rows.append(
                SinusoidSummary(sk[0], sk[1], float(np.mean(amps)), sig)
            )
        rows.sort(
            key=lambda r: (
                ALL_STRUCTURES.index(r.structure),
                -r.mean_amplitude,
                r.order,
            )
        )
        return rows


def _surviving_orders(selected: Sequence[str]) -> list[tuple[Structure, int]]:
    keys = []
    for name in selected:
        parsed = parse_harmonic_name(name)
        if parsed is not None and (parsed[0], parsed[2]) not in keys:
            keys.append((parsed[0], parsed[2]))
    return keys


def cross_validate(
    docs: Sequence[DocumentContour],
    model_specs: Sequence[ModelSpec],
    n_folds: int = 10,
    seed: int = 0,
    lam: float = DEFAULT_LAMBDA,
    alpha: float = DEFAULT_ALPHA,
) -> CvReport:
    """Document-level k-fold evaluation of every model spec.

    Harmonic orders are recomputed from each training fold, every model is
    selected and refit on training tokens, and validation MSE is measured on
    the held-out documents. ANOVA runs per fold for each surviving order.
    """
    docs = list(docs)
    if len(docs) < n_folds:
        raise TooFewDocuments(f"{len(docs)} documents for {n_folds} folds")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(docs))
    fold_of_doc = {docs[perm[i]].doc_id: i % n_folds for i in range(len(docs))}

    union_blocks = frozenset().union(*(spec.blocks for spec in model_specs))
    union_structures = tuple(s for s in ALL_STRUCTURES if s.value in union_blocks)

    orders_per_fold = []
    results = []
    for fold in range(n_folds):
        train = [d for d in docs if fold_of_doc[d.doc_id] != fold]
        val = [d for d in docs if fold_of_doc[d.doc_id] == fold]
        orders = orders_from_training(train, union_structures)
        orders_per_fold.append(orders)
        y_train = surprisal_target(train)
        y_val = surprisal_target(val)
        train_full = assemble_matrix(train, union_blocks, orders)
        val_full = assemble_matrix(val, union_blocks, orders)

        baseline_X = assemble_matrix(train, {BASELINE_BLOCK})
        baseline_fit = ols_fit(baseline_X, y_train)
        anova_cache: dict[tuple[Structure, int], AnovaResult] = {}

        def order_anova(structure: Structure, k: int) -> AnovaResult:
            key = (structure, k)
            if key not in anova_cache:
                sin_name = f"{structure.value}_sin_{k}"
                cos_name = f"{structure.value}_cos_{k}"
                pair = train_full.select((sin_name, cos_name))
                aug = FeatureMatrix(
                    np.column_stack([baseline_X.values, pair.values]),
                    baseline_X.column_names + (sin_name, cos_name),
                )
                anova_cache[key] = anova_order_test(
                    baseline_fit, ols_fit(aug, y_train), alpha
                )
            return anova_cache[key]

        for spec in model_specs:
            names = matrix_column_names(spec.blocks, orders)
            sel = select_and_refit(train_full.select(names), y_train, lam)
            fold_mse = mse(sel.fit, val_full.select(sel.selected), y_val)
            coeffs = {
                name: float(b)
                for name, b in zip(sel.fit.column_names, sel.fit.coefficients)
            }
            amplitudes = {}
            anova = {}
            for structure, k in _surviving_orders(sel.selected):
                b_sin = coeffs.get(f"{structure.value}_sin_{k}", 0.0)
                b_cos = coeffs.get(f"{structure.value}_cos_{k}", 0.0)
                amplitudes[(structure, k)] = amplitude(b_sin, b_cos)
                anova[(structure, k)] = order_anova(structure, k)
            results.append(
                FoldModelResult(
                    model=spec.name,
                    fold=fold,
                    mse=fold_mse,
                    selected=sel.selected,
                    coefficients=coeffs,
                    amplitudes=amplitudes,
                    anova=anova,
                    lasso_converged=sel.lasso.converged,
                )
            )

    return CvReport(
        models=tuple(spec.name for spec in model_specs),
        n_folds=n_folds,
        seed=seed,
        lam=lam,
        alpha=alpha,
        fold_of_doc=fold_of_doc,
        orders_per_fold=tuple(orders_per_fold),
        results=tuple(results),
    )
