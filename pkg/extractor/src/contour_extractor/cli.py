"""CLI: segmented texts in, contour file plus metadata sidecar out."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ExtractorError
from .extract import extract_corpus, write_records
from .models import load_model
from .segments import load_segmented


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contour-extract",
        description=(
            "Compute per-subword surprisal contours from segmented texts"
            " with a causal language model."
        ),
    )
    parser.add_argument(
        "input",
        type=Path,
        help="JSONL of {doc_id, text, edus, sentences, paragraphs} records",
    )
    parser.add_argument("--output", type=Path, required=True)
    parser.add_argument(
        "--model",
        default="cache-bigram",
        help="model identifier: 'cache-bigram' or a Hugging Face model id",
    )
    parser.add_argument(
        "--meta",
        type=Path,
        default=None,
        help="metadata sidecar path (default: <output>.meta.json)",
    )
    parser.add_argument(
        "--no-eos",
        action="store_true",
        help="do not append the end-of-string surprisal row",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        docs = load_segmented(args.input)
        model = load_model(args.model)
        records, meta = extract_corpus(docs, model, emit_eos=not args.no_eos)
        write_records(records, args.output)
        meta_path = args.meta or args.output.with_suffix(
            args.output.suffix + ".meta.json"
        )
        with open(meta_path, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except (ExtractorError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"wrote {args.output} ({meta['n_documents']} documents,"
        f" {meta['n_tokens']} rows) and {meta_path}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
