"""Seeded generator of contours with known harmonic ground truth.

Documents are built top-down (EDU lengths first, then grouped into
sentences and paragraphs) so the nesting invariants hold by construction.
The surprisal of each token is the intercept plus the configured
time-scaled sinusoids plus Gaussian noise, clipped at zero.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .contours import (
    DocumentContour,
    Structure,
    TokenRecord,
    replace_surprisals,
    unit_offsets_and_lengths,
    validate_document,
)
from .errors import InvalidSpec
from .features import harmonic_pair


@dataclass(frozen=True)
class SyntheticSpec:
    """Shape and signal parameters of a synthetic corpus."""

    n_docs: int
    edus_per_doc: tuple[int, int] = (8, 12)
    tokens_per_edu: tuple[int, int] = (8, 20)
    edus_per_sentence: tuple[int, int] = (1, 3)
    sentences_per_paragraph: tuple[int, int] = (1, 3)
    intercept: float = 5.0
    amplitudes: Mapping[tuple[Structure, int], tuple[float, float]] = field(
        default_factory=dict
    )
    noise_sd: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_docs < 1:
            raise InvalidSpec(f"n_docs must be >= 1, got {self.n_docs}")
        if self.noise_sd < 0:
            raise InvalidSpec(f"noise_sd must be >= 0, got {self.noise_sd}")
        for name in (
            "edus_per_doc",
            "tokens_per_edu",
            "edus_per_sentence",
            "sentences_per_paragraph",
        ):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise InvalidSpec(f"{name} range ({lo}, {hi}) is empty or < 1")
        for (structure, k) in self.amplitudes:
            if k < 1:
                raise InvalidSpec(f"harmonic order {k} for {structure} is < 1")


def spec_from_json(path) -> SyntheticSpec:
    """Load a SyntheticSpec from its JSON config file."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        amplitudes = {
            (Structure(entry["structure"]), int(entry["k"])): (
                float(entry["beta_sin"]),
                float(entry["beta_cos"]),
            )
            for entry in raw.pop("amplitudes", [])
        }
        ranges = {
            name: tuple(raw.pop(name))
            for name in (
                "edus_per_doc",
                "tokens_per_edu",
                "edus_per_sentence",
                "sentences_per_paragraph",
            )
            if name in raw
        }
        return SyntheticSpec(amplitudes=amplitudes, **ranges, **raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"bad synthetic spec {path}: {exc}") from exc


def _group_sizes(rng, total: int, lo: int, hi: int) -> list[int]:
    """Random partition of ``total`` items into groups of lo..hi (last may be short)."""
    sizes = []
    left = total
    while left > 0:
        size = min(int(rng.integers(lo, hi + 1)), left)
        sizes.append(size)
        left -= size
    return sizes


def _one_document(spec: SyntheticSpec, ordinal: int) -> DocumentContour:
    rng = np.random.default_rng(spec.seed + ordinal)
    n_edus = int(rng.integers(spec.edus_per_doc[0], spec.edus_per_doc[1] + 1))
    edu_lengths = rng.integers(
        spec.tokens_per_edu[0], spec.tokens_per_edu[1] + 1, size=n_edus
    )
    edus_per_sent = _group_sizes(rng, n_edus, *spec.edus_per_sentence)
    sents_per_par = _group_sizes(rng, len(edus_per_sent), *spec.sentences_per_paragraph)

    edu_ids = np.repeat(np.arange(n_edus), edu_lengths)
    sent_of_edu = np.repeat(np.arange(len(edus_per_sent)), edus_per_sent)
    par_of_sent = np.repeat(np.arange(len(sents_per_par)), sents_per_par)
    sent_ids = sent_of_edu[edu_ids]
    par_ids = par_of_sent[sent_ids]
    n = len(edu_ids)

    n_chars = rng.integers(1, 13, size=n)
    noise = rng.normal(0.0, spec.noise_sd, size=n) if spec.noise_sd > 0 else np.zeros(n)

    tokens = tuple(
        TokenRecord(
            index=t,
            text=f"w{t}",
            surprisal=0.0,
            n_chars=int(n_chars[t]),
            edu_id=int(edu_ids[t]),
            sent_id=int(sent_ids[t]),
            par_id=int(par_ids[t]),
        )
        for t in range(n)
    )
    doc = validate_document(
        DocumentContour(doc_id=f"synth-{spec.seed}-{ordinal:04d}", tokens=tokens)
    )

    signal = np.full(n, spec.intercept)
    for (structure, k), (b_sin, b_cos) in spec.amplitudes.items():
        offsets, lengths = unit_offsets_and_lengths(doc, structure)
        sin, cos = harmonic_pair(offsets, lengths, k)
        signal += b_sin * sin + b_cos * cos
    values = signal + noise
    clipped = int((values < 0).sum())
    if clipped > 0.01 * n:
        warnings.warn(
            f"{doc.doc_id}: clipped {clipped}/{n} negative surprisals;"
            " ground-truth recovery may be biased",
            stacklevel=3,
        )
    return replace_surprisals(doc, np.maximum(values, 0.0))


def generate_synthetic(spec: SyntheticSpec) -> list[DocumentContour]:
    """Deterministic corpus of validated documents with known ground truth."""
    return [_one_document(spec, i) for i in range(spec.n_docs)]
