"""Command-line pipeline driver.

Exit codes: 0 on success, 1 on input validation failure, 2 on usage or
configuration errors (argparse's own convention). The HS_SEED environment
variable, when set, overrides any configured seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import boundary_report, permute_surprisal, spectrum
from .contours import Structure
from .errors import ConfigError, ContourError, InvalidSpec
from .features import (
    FeatureMatrix,
    assemble_matrix,
    harmonic_features,
    orders_from_training,
    surprisal_target,
)
from .fitting import ols_fit, select_and_refit
from .pipeline import (
    BOUNDARY_TABLE_COLUMNS,
    PipelineConfig,
    boundary_table_rows,
    load_contours,
    run_pipeline,
    write_contours,
    write_csv,
)
from .plotting import plot_contour
from .stats import DEFAULT_ALPHA, DEFAULT_LAMBDA, anova_order_test
from .synthetic import generate_synthetic, spec_from_json

_STRUCTURE_CHOICES = ("doc", "edu", "sent", "par")


def _structures_arg(value: str) -> tuple[str, ...]:
    parts = tuple(p.strip() for p in value.split(",") if p.strip())
    for p in parts:
        if p not in (*_STRUCTURE_CHOICES, "all"):
            raise argparse.ArgumentTypeError(f"unknown structure {p!r}")
    return parts


def _seed(args) -> int:
    env = os.environ.get("HS_SEED")
    return int(env) if env is not None else args.seed


def _add_common(sub, *, folds: bool = True):
    sub.add_argument("input", type=Path, help="contour file (one JSON document per line)")
    sub.add_argument("--output-dir", type=Path, default=Path("."), help="where to write tables")
    sub.add_argument(
        "--structures",
        type=_structures_arg,
        default=("doc", "edu", "sent", "par", "all"),
        help="comma-separated scalings from doc,edu,sent,par,all",
    )
    sub.add_argument("--lasso-lambda", type=float, default=DEFAULT_LAMBDA)
    sub.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    sub.add_argument("--seed", type=int, default=0)
    if folds:
        sub.add_argument("--n-folds", type=int, default=10)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contour-harmonics",
        description="Detect and test periodic structure in surprisal contours.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a contour file")
    p.add_argument("input", type=Path)

    p = sub.add_parser("fit", help="select-and-refit one model on the whole corpus")
    _add_common(p, folds=False)

    p = sub.add_parser("cv", help="cross-validated model comparison tables")
    _add_common(p)

    p = sub.add_parser("anova", help="order-wise F tests on the whole corpus")
    p.add_argument("input", type=Path)
    p.add_argument("--output-dir", type=Path, default=Path("."))
    p.add_argument("--structure", choices=_STRUCTURE_CHOICES, default="edu")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--max-order", type=int, default=None, help="cap on tested orders")

    p = sub.add_parser("boundaries", help="boundary surprisal table")
    p.add_argument("input", type=Path)
    p.add_argument("--output-dir", type=Path, default=Path("."))

    p = sub.add_parser("permute", help="shuffle surprisals within each document")
    p.add_argument("input", type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", type=Path, required=True)

    p = sub.add_parser("spectrum", help="per-document periodogram CSV")
    p.add_argument("input", type=Path)
    p.add_argument("--output-dir", type=Path, default=Path("."))

    p = sub.add_parser("synth", help="generate a synthetic corpus from a JSON spec")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)

    p = sub.add_parser("plot", help="SVG of one document's contour and fit")
    _add_common(p, folds=False)
    p.add_argument("--doc-id", required=True)
    p.add_argument("--top-n", type=int, default=3)
    p.add_argument("--output", type=Path, required=True)

    p = sub.add_parser("report", help="full pipeline: cv + boundary tables")
    _add_common(p)

    return parser


def _cmd_validate(args) -> int:
    docs = load_contours(args.input)
    tokens = sum(d.n_tokens for d in docs)
    print(f"{len(docs)} documents, {tokens} tokens: OK")
    return 0


def _fit_corpus(args):
    docs = load_contours(args.input)
    blocks = {"baseline"}
    for s in args.structures:
        blocks |= set(_STRUCTURE_CHOICES) if s == "all" else {s}
    structures = [s for s in Structure if s.value in blocks]
    orders = orders_from_training(docs, structures)
    X = assemble_matrix(docs, blocks, orders)
    y = surprisal_target(docs)
    return docs, X, y, orders


def _cmd_fit(args) -> int:
    docs, X, y, _ = _fit_corpus(args)
    sel = select_and_refit(X, y, args.lasso_lambda)
    args.output_dir.mkdir(parents=True, exist_ok=True)
    out = args.output_dir / "fit_coefficients.csv"
    rows = [
        [name, float(b)]
        for name, b in zip(sel.fit.column_names, sel.fit.coefficients)
    ]
    write_csv(out, ("column", "coefficient"), rows)
    print(
        f"fit: {len(docs)} docs, {sel.fit.n_rows} tokens,"
        f" {len(sel.selected)}/{X.n_cols} columns kept,"
        f" mse {sel.fit.rss / sel.fit.n_rows:.6g} -> {out}"
    )
    return 0


def _cmd_cv(args, tables) -> int:
    config = PipelineConfig(
        input=args.input,
        output_dir=args.output_dir,
        structures=args.structures,
        lasso_lambda=args.lasso_lambda,
        alpha=args.alpha,
        n_folds=args.n_folds,
        seed=_seed(args),
    )
    report = run_pipeline(config, tables=tables)
    for path in report.written:
        print(f"wrote {path}")
    return 0


def _cmd_anova(args) -> int:
    docs = load_contours(args.input)
    structure = Structure(args.structure)
    orders = orders_from_training(docs, [structure])
    max_order = orders.order_for(structure)
    if args.max_order is not None:
        max_order = min(max_order, args.max_order)
    X = assemble_matrix(docs, {"baseline"})
    y = surprisal_target(docs)
    base = ols_fit(X, y)
    rows = []
    for k in range(1, max_order + 1):
        sin = np.concatenate([harmonic_features(d, structure, k)[0] for d in docs])
        cos = np.concatenate([harmonic_features(d, structure, k)[1] for d in docs])
        aug = FeatureMatrix(
            np.column_stack([X.values, sin, cos]),
            X.column_names + (f"{structure.value}_sin_{k}", f"{structure.value}_cos_{k}"),
        )
        result = anova_order_test(base, ols_fit(aug, y), args.alpha)
        rows.append(
            [
                structure.value,
                k,
                result.f_stat,
                result.df_den,
                result.p_value,
                "*" if result.significant else "",
            ]
        )
    args.output_dir.mkdir(parents=True, exist_ok=True)
    out = args.output_dir / "anova_table.csv"
    write_csv(
        out,
        ("structure", "order", "f_stat", "df_den", "p_value", "significant"),
        rows,
    )
    print(f"wrote {out}")
    return 0


def _cmd_boundaries(args) -> int:
    docs = load_contours(args.input)
    args.output_dir.mkdir(parents=True, exist_ok=True)
    out = args.output_dir / "boundary_table.csv"
    write_csv(out, BOUNDARY_TABLE_COLUMNS, boundary_table_rows(boundary_report(docs)))
    print(f"wrote {out}")
    return 0


def _cmd_permute(args) -> int:
    docs = load_contours(args.input)
    write_contours(permute_surprisal(docs, _seed(args)), args.output)
    print(f"wrote {args.output}")
    return 0


def _cmd_spectrum(args) -> int:
    docs = load_contours(args.input)
    rows = []
    for doc in docs:
        if doc.n_tokens < 2:
            print(f"skipping {doc.doc_id}: too short for a periodogram")
            continue
        for k, power in enumerate(spectrum(doc)):
            rows.append([doc.doc_id, k, float(power)])
    args.output_dir.mkdir(parents=True, exist_ok=True)
    out = args.output_dir / "spectrum.csv"
    write_csv(out, ("doc_id", "bin", "power"), rows)
    print(f"wrote {out}")
    return 0


def _cmd_synth(args) -> int:
    spec = spec_from_json(args.config)
    write_contours(generate_synthetic(spec), args.output)
    print(f"wrote {args.output}")
    return 0


def _cmd_plot(args) -> int:
    docs, X, y, _ = _fit_corpus(args)
    by_id = {d.doc_id: d for d in docs}
    if args.doc_id not in by_id:
        raise ConfigError(f"doc_id {args.doc_id!r} not in {args.input}")
    sel = select_and_refit(X, y, args.lasso_lambda)
    plot_contour(by_id[args.doc_id], sel.fit, args.top_n, args.output)
    print(f"wrote {args.output}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "validate": _cmd_validate,
        "fit": _cmd_fit,
        "cv": lambda a: _cmd_cv(a, tables=("mse", "amplitude")),
        "anova": _cmd_anova,
        "boundaries": _cmd_boundaries,
        "permute": _cmd_permute,
        "spectrum": _cmd_spectrum,
        "synth": _cmd_synth,
        "plot": _cmd_plot,
        "report": lambda a: _cmd_cv(a, tables=("mse", "amplitude", "boundary")),
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, InvalidSpec) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ContourError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
