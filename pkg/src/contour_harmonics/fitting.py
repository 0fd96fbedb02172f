"""Ordinary least squares, L1-penalized fitting, and select-then-refit.

The lasso objective is (1/(2n))*||y - X b||^2 + lambda * sum_j |b_j| over
the penalized columns; the intercept column is never penalized and no
column standardization is applied. Minimization is cyclic coordinate
descent with exact soft-thresholding, so discarded coefficients are
exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ColumnMismatch, EmptyMatrix
from .features import FeatureMatrix

#: Convergence threshold on the largest coefficient change in a sweep.
CD_TOL = 1e-8
#: Sweep budget before a fit is flagged as non-converged.
CD_MAX_SWEEPS = 10_000
#: Singular values below this fraction of the largest are treated as zero.
SVD_CUTOFF = 1e-10


@dataclass(frozen=True)
class FitResult:
    """Coefficients and fit diagnostics for one linear fit."""

    coefficients: np.ndarray
    column_names: tuple[str, ...]
    rss: float
    n_rows: int
    n_params_effective: int
    converged: bool = True
    objective_path: tuple[float, ...] = ()

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.column_names.index(name)])


@dataclass(frozen=True)
class SelectedFit:
    """Outcome of lasso selection followed by an OLS refit on survivors."""

    fit: FitResult
    selected: tuple[str, ...]
    lasso: FitResult


def _check_rows(X: FeatureMatrix, y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if X.n_rows == 0:
        raise EmptyMatrix("design matrix has no rows")
    if y.shape != (X.n_rows,):
        raise ValueError(f"y has shape {y.shape}, expected ({X.n_rows},)")
    return y


def ols_fit(X: FeatureMatrix, y: np.ndarray) -> FitResult:
    """Minimum-norm least squares via SVD with a relative cutoff."""
    y = _check_rows(X, y)
    beta, _, rank, _ = np.linalg.lstsq(X.values, y, rcond=SVD_CUTOFF)
    resid = y - X.values @ beta
    return FitResult(
        coefficients=beta,
        column_names=X.column_names,
        rss=float(resid @ resid),
        n_rows=X.n_rows,
        n_params_effective=int(rank),
    )


@njit(cache=True)
def _cd_sweep(values, resid, beta, colsq, lam, penalized, idx):
    """One cyclic pass over the columns in ``idx``; returns max |change|."""
    n = values.shape[0]
    maxd = 0.0
    for jj in range(idx.shape[0]):
        j = idx[jj]
        cj = colsq[j]
        if cj == 0.0:
            continue
        col = values[:, j]
        rho = 0.0
        for i in range(n):
            rho += col[i] * resid[i]
        rho = rho / n + cj * beta[j]
        if penalized[j]:
            if rho > lam:
                new = (rho - lam) / cj
            elif rho < -lam:
                new = (rho + lam) / cj
            else:
                new = 0.0
        else:
            new = rho / cj
        d = new - beta[j]
        if d != 0.0:
            for i in range(n):
                resid[i] -= d * col[i]
            beta[j] = new
            ad = abs(d)
            if ad > maxd:
                maxd = ad
    return maxd


@njit(cache=True)
def _cd_objective(resid, beta, lam, penalized, n):
    rss = 0.0
    for i in range(resid.shape[0]):
        rss += resid[i] * resid[i]
    l1 = 0.0
    for j in range(beta.shape[0]):
        if penalized[j]:
            l1 += abs(beta[j])
    return rss / (2.0 * n) + lam * l1


@njit(cache=True)
def _cd_fit(values, y, lam, penalized, tol, max_sweeps):
    n, p = values.shape
    beta = np.zeros(p)
    resid = y.copy()
    colsq = np.empty(p)
    for j in range(p):
        col = values[:, j]
        s = 0.0
        for i in range(n):
            s += col[i] * col[i]
        colsq[j] = s / n
    objectives = np.empty(max_sweeps)
    all_idx = np.arange(p)
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        maxd = _cd_sweep(values, resid, beta, colsq, lam, penalized, all_idx)
        objectives[sweeps] = _cd_objective(resid, beta, lam, penalized, n)
        sweeps += 1
        if maxd < tol:
            converged = True
            break
        n_active = 0
        for j in range(p):
            if beta[j] != 0.0 or not penalized[j]:
                n_active += 1
        active = np.empty(n_active, np.int64)
        k = 0
        for j in range(p):
            if beta[j] != 0.0 or not penalized[j]:
                active[k] = j
                k += 1
        while sweeps < max_sweeps:
            maxd = _cd_sweep(values, resid, beta, colsq, lam, penalized, active)
            objectives[sweeps] = _cd_objective(resid, beta, lam, penalized, n)
            sweeps += 1
            if maxd < tol:
                break
    return beta, resid, objectives[:sweeps].copy(), converged


def lasso_fit(X: FeatureMatrix, y: np.ndarray, lam: float = 0.01) -> FitResult:
    """Cyclic coordinate descent for the L1-penalized least-squares fit.

    Hitting the sweep budget returns a result flagged ``converged=False``
    rather than raising. Alternates full sweeps with sweeps restricted to
    the currently active columns; convergence is declared only when a full
    sweep moves no coefficient by CD_TOL or more.
    """
    if lam < 0:
        raise ValueError(f"penalty weight must be >= 0, got {lam}")
    y = _check_rows(X, y)
    values = np.asfortranarray(X.values, dtype=np.float64)
    penalized = np.array([name != "intercept" for name in X.column_names])
    beta, resid, objectives, converged = _cd_fit(
        values, y, float(lam), penalized, CD_TOL, CD_MAX_SWEEPS
    )
    return FitResult(
        coefficients=beta,
        column_names=X.column_names,
        rss=float(resid @ resid),
        n_rows=X.n_rows,
        n_params_effective=int(np.count_nonzero(beta)),
        converged=converged,
        objective_path=tuple(objectives),
    )


def select_and_refit(
    X: FeatureMatrix, y: np.ndarray, lam: float = 0.01
) -> SelectedFit:
    """Lasso selection, duplicate-column drop, then OLS on the survivors.

    Survivors are the columns with nonzero lasso coefficients (the intercept
    is always kept); among them, bit-identical value vectors keep only the
    first in column order.
    """
    lasso = lasso_fit(X, y, lam)
    survivors = [
        name
        for name, b in zip(X.column_names, lasso.coefficients)
        if name == "intercept" or b != 0.0
    ]
    seen: dict[bytes, str] = {}
    deduped = []
    for name in survivors:
        key = X.column(name).tobytes()
        if key in seen:
            continue
        seen[key] = name
        deduped.append(name)
    sub = X.select(deduped)
    return SelectedFit(fit=ols_fit(sub, y), selected=tuple(deduped), lasso=lasso)


def predict(fit: FitResult, X: FeatureMatrix) -> np.ndarray:
    if X.column_names != fit.column_names:
        raise ColumnMismatch(
            f"matrix columns {X.column_names[:4]}... do not match fit columns"
        )
    return X.values @ fit.coefficients


def mse(fit: FitResult, X: FeatureMatrix, y: np.ndarray) -> float:
    y = _check_rows(X, y)
    resid = y - predict(fit, X)
    return float(resid @ resid) / len(y)
