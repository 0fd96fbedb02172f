"""File loading, pipeline orchestration, and CSV report tables.

Reports use fixed column orders and 6-significant-digit formatting so two
runs with the same config and input produce byte-identical files.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .analysis import BoundaryCell, boundary_report
from .contours import (
    DocumentContour,
    contour_line,
    parse_contour_line,
    validate_document,
)
from .errors import ConfigError, EmptyInput, ParseError, ValidationError
from .stats import (
    CvReport,
    DEFAULT_ALPHA,
    DEFAULT_LAMBDA,
    PairedTestResult,
    cross_validate,
    holm_correction,
    paired_t_one_sided,
    standard_model_specs,
)

#: Report row order for models (those present in the run).
MODEL_ROW_ORDER = ("baseline", "doc", "edu", "sent", "par", "all")

MSE_TABLE_COLUMNS = (
    "model",
    "mean_mse",
    "sd_mse",
    "delta_vs_baseline",
    "p_raw",
    "p_holm",
    "significant",
)
AMPLITUDE_TABLE_COLUMNS = (
    "model",
    "structure",
    "order",
    "mean_amplitude",
    "significant_folds",
)
BOUNDARY_TABLE_COLUMNS = (
    "structure",
    "window",
    "mean_before",
    "sd_before",
    "n_before",
    "mean_after",
    "sd_after",
    "n_after",
    "mean_non_boundary",
    "sd_non_boundary",
    "n_non_boundary",
)


@dataclass(frozen=True)
class PipelineConfig:
    """Settings for a full pipeline run."""

    input: Path
    output_dir: Path
    structures: tuple[str, ...] = ("doc", "edu", "sent", "par", "all")
    lasso_lambda: float = DEFAULT_LAMBDA
    alpha: float = DEFAULT_ALPHA
    n_folds: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.lasso_lambda < 0:
            raise ConfigError(f"lasso-lambda must be >= 0, got {self.lasso_lambda}")
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.n_folds < 2:
            raise ConfigError(f"n-folds must be >= 2, got {self.n_folds}")
        unknown = set(self.structures) - {"doc", "edu", "sent", "par", "all"}
        if unknown:
            raise ConfigError(f"unknown structures {sorted(unknown)}")


@dataclass(frozen=True)
class PipelineReport:
    """Everything a pipeline run computed, plus where the tables went."""

    cv: CvReport
    paired_tests: Mapping[str, PairedTestResult]
    boundary_cells: tuple[BoundaryCell, ...]
    written: tuple[Path, ...]


def load_contours(path: Path | str) -> list[DocumentContour]:
    """Parse and validate every line of a contour file.

    Errors carry the 1-based line number of the offending document.
    """
    docs: list[DocumentContour] = []
    seen_ids: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                doc = parse_contour_line(line)
            except (ValueError, KeyError, TypeError) as exc:
                raise ParseError(lineno, str(exc)) from exc
            if doc.doc_id in seen_ids:
                raise ParseError(
                    lineno,
                    f"duplicate doc_id {doc.doc_id!r}"
                    f" (first seen on line {seen_ids[doc.doc_id]})",
                )
            seen_ids[doc.doc_id] = lineno
            try:
                docs.append(validate_document(doc))
            except ValidationError as exc:
                exc.line = lineno
                raise
    if not docs:
        raise EmptyInput(f"no documents in {path}")
    return docs


def write_contours(docs: Sequence[DocumentContour], path: Path | str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(contour_line(doc) + "\n")


def _fmt(value) -> str:
    """Fixed CSV cell formatting: 6 significant digits for floats."""
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".6g")
    return str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def paired_tests_vs_baseline(cv: CvReport) -> dict[str, PairedTestResult]:
    """One-sided paired t-tests of every scaled model against the baseline,
    Holm-corrected across the whole family."""
    scaled = [m for m in cv.models if m != "baseline"]
    baseline = cv.fold_mses("baseline")
    tests = {m: paired_t_one_sided(baseline, cv.fold_mses(m)) for m in scaled}
    adjusted = holm_correction([tests[m].one_sided_p for m in scaled])
    return {
        m: dataclasses.replace(tests[m], holm_adjusted_p=adj)
        for m, adj in zip(scaled, adjusted)
    }


def mse_table_rows(
    cv: CvReport, paired: Mapping[str, PairedTestResult], alpha: float
) -> list[list]:
    rows = []
    baseline_mean = float(cv.fold_mses("baseline").mean())
    for model in MODEL_ROW_ORDER:
        if model not in cv.models:
            continue
        mses = cv.fold_mses(model)
        row: list = [model, float(mses.mean()), float(mses.std(ddof=1))]
        if model == "baseline":
            row += [None, None, None, ""]
        else:
            test = paired[model]
            row += [
                baseline_mean - float(mses.mean()),
                test.one_sided_p,
                test.holm_adjusted_p,
                "*" if test.holm_adjusted_p < alpha else "",
            ]
        rows.append(row)
    return rows


def amplitude_table_rows(cv: CvReport) -> list[list]:
    rows = []
    for model in MODEL_ROW_ORDER:
        if model == "baseline" or model not in cv.models:
            continue
        for summary in cv.amplitude_summary(model):
            rows.append(
                [
                    model,
                    summary.structure.value,
                    summary.order,
                    summary.mean_amplitude,
                    summary.significant_folds,
                ]
            )
    return rows


def boundary_table_rows(cells: Sequence[BoundaryCell]) -> list[list]:
    return [
        [
            c.structure.value,
            c.window,
            c.mean_before,
            c.sd_before,
            c.n_before,
            c.mean_after,
            c.sd_after,
            c.n_after,
            c.mean_non_boundary,
            c.sd_non_boundary,
            c.n_non_boundary,
        ]
        for c in cells
    ]


def run_meta(config: PipelineConfig, cv: CvReport, n_docs: int) -> dict:
    return {
        "input": str(config.input),
        "n_documents": n_docs,
        "structures": list(config.structures),
        "lasso_lambda": config.lasso_lambda,
        "alpha": config.alpha,
        "n_folds": config.n_folds,
        "seed": config.seed,
        "models": list(cv.models),
        "fold_of_doc": dict(sorted(cv.fold_of_doc.items())),
        "orders_per_fold": [
            {s.value: k for s, k in sorted(o.orders.items(), key=lambda x: x[0].value)}
            for o in cv.orders_per_fold
        ],
        "lasso_converged": all(r.lasso_converged for r in cv.results),
    }


def run_pipeline(
    config: PipelineConfig,
    docs: Sequence[DocumentContour] | None = None,
    tables: Sequence[str] = ("mse", "amplitude", "boundary"),
) -> PipelineReport:
    """Cross-validate, test, and write the report tables.

    ``docs`` may be passed directly (already validated) to skip re-reading
    the input file.
    """
    if docs is None:
        docs = load_contours(config.input)
    config.output_dir.mkdir(parents=True, exist_ok=True)

    cv = cross_validate(
        docs,
        standard_model_specs(config.structures),
        n_folds=config.n_folds,
        seed=config.seed,
        lam=config.lasso_lambda,
        alpha=config.alpha,
    )
    paired = paired_tests_vs_baseline(cv)

    written: list[Path] = []
    if "mse" in tables:
        path = config.output_dir / "mse_table.csv"
        write_csv(path, MSE_TABLE_COLUMNS, mse_table_rows(cv, paired, config.alpha))
        written.append(path)
    if "amplitude" in tables:
        path = config.output_dir / "amplitude_table.csv"
        write_csv(path, AMPLITUDE_TABLE_COLUMNS, amplitude_table_rows(cv))
        written.append(path)
    cells: tuple[BoundaryCell, ...] = ()
    if "boundary" in tables:
        cells = tuple(boundary_report(docs))
        path = config.output_dir / "boundary_table.csv"
        write_csv(path, BOUNDARY_TABLE_COLUMNS, boundary_table_rows(cells))
        written.append(path)

    meta_path = config.output_dir / "run_meta.json"
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(run_meta(config, cv, len(docs)), fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(meta_path)

    return PipelineReport(
        cv=cv,
        paired_tests=paired,
        boundary_cells=cells,
        written=tuple(written),
    )
