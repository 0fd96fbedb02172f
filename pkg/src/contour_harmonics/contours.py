"""Data model for surprisal contours annotated with nested structural units.

A document is an ordered sequence of tokens, each carrying a surprisal
value and the ids of its elementary discourse unit (EDU), sentence, and
paragraph. Units of each granularity partition the token sequence, and the
three granularities nest: sentence boundaries fall on EDU boundaries,
paragraph boundaries on sentence boundaries.

Documents are immutable after validation and safe to share across workers.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    EmptyDocument,
    IndexOutOfRange,
    NegativeCharCount,
    NegativeSurprisal,
    NestingViolation,
    NonConsecutiveTokenIndices,
    NonContiguousUnitIds,
)


class Structure(enum.Enum):
    """Granularity of a structural unit, from the whole document down to EDUs."""

    DOCUMENT = "doc"
    EDU = "edu"
    SENTENCE = "sent"
    PARAGRAPH = "par"

    def __str__(self) -> str:
        return self.value


#: Nested granularities ordered fine to coarse (document excluded).
NESTED_STRUCTURES = (Structure.EDU, Structure.SENTENCE, Structure.PARAGRAPH)

#: Canonical ordering used for feature blocks and report rows.
ALL_STRUCTURES = (
    Structure.DOCUMENT,
    Structure.EDU,
    Structure.SENTENCE,
    Structure.PARAGRAPH,
)

_TOKEN_FIELDS = {"i", "text", "surprisal", "n_chars", "edu", "sent", "par"}
_DOC_FIELDS = {"doc_id", "tokens"}


@dataclass(frozen=True, slots=True)
class TokenRecord:
    """One base unit of a contour.

    ``text`` may be empty for an end-of-string marker; surprisal is in
    whatever log units the producer used (the math downstream is
    base-agnostic).
    """

    index: int
    text: str
    surprisal: float
    n_chars: int
    edu_id: int
    sent_id: int
    par_id: int

    def unit_id(self, structure: Structure) -> int:
        if structure is Structure.EDU:
            return self.edu_id
        if structure is Structure.SENTENCE:
            return self.sent_id
        if structure is Structure.PARAGRAPH:
            return self.par_id
        return 0  # whole document


@dataclass(frozen=True, slots=True)
class UnitSpan:
    """Contiguous run of tokens forming one unit of one structure."""

    structure: Structure
    unit_id: int
    start: int
    length: int


@dataclass(frozen=True)
class DocumentContour:
    """Ordered token records plus (after validation) derived unit spans."""

    doc_id: str
    tokens: tuple[TokenRecord, ...]
    spans: Mapping[Structure, tuple[UnitSpan, ...]] = field(default_factory=dict)

    @property
    def n_tokens(self) -> int:
        return len(self.tokens)

    @property
    def validated(self) -> bool:
        return bool(self.spans)

    def surprisals(self) -> np.ndarray:
        return np.array([t.surprisal for t in self.tokens], dtype=float)


def _unit_ids(doc: DocumentContour, structure: Structure) -> list[int]:
    return [t.unit_id(structure) for t in doc.tokens]


def _derive_spans(
    doc_id: str, structure: Structure, ids: list[int]
) -> tuple[UnitSpan, ...]:
    """Split an id sequence into spans, enforcing 0-based contiguous ids."""
    if ids[0] != 0:
        raise NonContiguousUnitIds(
            f"{doc_id}: first {structure.value} id is {ids[0]}, expected 0"
        )
    spans: list[UnitSpan] = []
    start = 0
    for t in range(1, len(ids)):
        step = ids[t] - ids[t - 1]
        if step == 0:
            continue
        if step != 1:
            raise NonContiguousUnitIds(
                f"{doc_id}: {structure.value} id jumps from {ids[t - 1]} to"
                f" {ids[t]} at token {t}"
            )
        spans.append(UnitSpan(structure, ids[start], start, t - start))
        start = t
    spans.append(UnitSpan(structure, ids[start], start, len(ids) - start))
    return tuple(spans)


def validate_document(doc: DocumentContour) -> DocumentContour:
    """Check every data-model invariant and attach derived unit spans.

    Raises a :class:`~contour_harmonics.errors.ValidationError` subclass on
    the first violation found.
    """
    if not doc.tokens:
        raise EmptyDocument(f"{doc.doc_id}: no tokens")
    for t, tok in enumerate(doc.tokens):
        if tok.index != t:
            raise NonConsecutiveTokenIndices(
                f"{doc.doc_id}: token at position {t} has index {tok.index}"
            )
        if not math.isfinite(tok.surprisal) or tok.surprisal < 0:
            raise NegativeSurprisal(
                f"{doc.doc_id}: token {t} has surprisal {tok.surprisal}"
            )
        if tok.n_chars < 0:
            raise NegativeCharCount(
                f"{doc.doc_id}: token {t} has n_chars {tok.n_chars}"
            )

    spans: dict[Structure, tuple[UnitSpan, ...]] = {
        Structure.DOCUMENT: (
            UnitSpan(Structure.DOCUMENT, 0, 0, len(doc.tokens)),
        )
    }
    for structure in NESTED_STRUCTURES:
        spans[structure] = _derive_spans(
            doc.doc_id, structure, _unit_ids(doc, structure)
        )

    # Coarser boundaries must be a subset of finer ones.
    edu_b = {s.start for s in spans[Structure.EDU][1:]}
    sent_b = {s.start for s in spans[Structure.SENTENCE][1:]}
    par_b = {s.start for s in spans[Structure.PARAGRAPH][1:]}
    if not sent_b <= edu_b:
        raise NestingViolation(
            f"{doc.doc_id}: sentence boundary at {sorted(sent_b - edu_b)}"
            " not on an EDU boundary"
        )
    if not par_b <= sent_b:
        raise NestingViolation(
            f"{doc.doc_id}: paragraph boundary at {sorted(par_b - sent_b)}"
            " not on a sentence boundary"
        )
    return replace(doc, spans=spans)


def unit_length_of(
    doc: DocumentContour, structure: Structure, token_index: int
) -> int:
    """Token count of the unit of ``structure`` containing ``token_index``."""
    if not 0 <= token_index < doc.n_tokens:
        raise IndexOutOfRange(
            f"{doc.doc_id}: token index {token_index} not in [0, {doc.n_tokens})"
        )
    for span in doc.spans[structure]:
        if span.start <= token_index < span.start + span.length:
            return span.length
    raise AssertionError("spans do not cover the document")  # pragma: no cover


def unit_offsets_and_lengths(
    doc: DocumentContour, structure: Structure
) -> tuple[np.ndarray, np.ndarray]:
    """Per-token 0-based offset within its unit and the unit's length."""
    offsets = np.empty(doc.n_tokens, dtype=np.int64)
    lengths = np.empty(doc.n_tokens, dtype=np.int64)
    for span in doc.spans[structure]:
        stop = span.start + span.length
        offsets[span.start:stop] = np.arange(span.length)
        lengths[span.start:stop] = span.length
    return offsets, lengths


def boundary_positions(
    doc: DocumentContour, structure: Structure
) -> tuple[int, ...]:
    """Interior inter-token boundaries of one structure, sorted ascending.

    Position ``b`` means "between token b-1 and token b"; document start and
    end are not boundaries.
    """
    return tuple(span.start for span in doc.spans[structure][1:])


def all_boundary_positions(doc: DocumentContour) -> tuple[int, ...]:
    """Union of EDU, sentence, and paragraph boundaries (equals the EDU set
    under nesting, computed as a union regardless)."""
    positions: set[int] = set()
    for structure in NESTED_STRUCTURES:
        positions.update(boundary_positions(doc, structure))
    return tuple(sorted(positions))


def parse_contour_line(line: str) -> DocumentContour:
    """Parse one document from its JSON line; unknown fields warn and drop.

    The result is unvalidated; call :func:`validate_document` to attach spans.
    Raises ``ValueError``/``KeyError``/``TypeError`` on malformed records,
    which the file loader turns into :class:`ParseError` with a line number.
    """
    record = json.loads(line)
    if not isinstance(record, dict):
        raise ValueError("document record must be a JSON object")
    extra = set(record) - _DOC_FIELDS
    if extra:
        warnings.warn(
            f"ignoring unknown document fields {sorted(extra)}", stacklevel=2
        )
    tokens = []
    for raw in record["tokens"]:
        extra = set(raw) - _TOKEN_FIELDS
        if extra:
            warnings.warn(
                f"ignoring unknown token fields {sorted(extra)}", stacklevel=2
            )
        tokens.append(
            TokenRecord(
                index=int(raw["i"]),
                text=str(raw["text"]),
                surprisal=float(raw["surprisal"]),
                n_chars=int(raw["n_chars"]),
                edu_id=int(raw["edu"]),
                sent_id=int(raw["sent"]),
                par_id=int(raw["par"]),
            )
        )
    return DocumentContour(doc_id=str(record["doc_id"]), tokens=tuple(tokens))


def contour_line(doc: DocumentContour) -> str:
    """Serialize a document to its one-line JSON record."""
    record = {
        "doc_id": doc.doc_id,
        "tokens": [
            {
                "i": t.index,
                "text": t.text,
                "surprisal": t.surprisal,
                "n_chars": t.n_chars,
                "edu": t.edu_id,
                "sent": t.sent_id,
                "par": t.par_id,
            }
            for t in doc.tokens
        ],
    }
    return json.dumps(record, ensure_ascii=False)


def replace_surprisals(
    doc: DocumentContour, values: Iterable[float]
) -> DocumentContour:
    """New document with the same structure but different surprisal values."""
    values = list(values)
    if len(values) != doc.n_tokens:
        raise ValueError("value count does not match token count")
    tokens = tuple(
        replace(tok, surprisal=float(v)) for tok, v in zip(doc.tokens, values)
    )
    return replace(doc, tokens=tokens)
