"""Segmented raw texts: character-offset EDU, sentence, and paragraph spans.

Spans of each granularity must partition the text (cover every character,
in order, without overlap), and the granularities must nest at the
character level: every sentence start is an EDU start, every paragraph
start a sentence start.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import SegmentationError

Span = tuple[int, int]


@dataclass(frozen=True)
class SegmentedText:
    doc_id: str
    text: str
    edus: tuple[Span, ...]
    sentences: tuple[Span, ...]
    paragraphs: tuple[Span, ...]

    def __post_init__(self):
        for name in ("edus", "sentences", "paragraphs"):
            _check_partition(self.doc_id, name, getattr(self, name), len(self.text))
        sent_starts = {s for s, _ in self.sentences}
        edu_starts = {s for s, _ in self.edus}
        par_starts = {s for s, _ in self.paragraphs}
        if not sent_starts <= edu_starts:
            raise SegmentationError(
                f"{self.doc_id}: sentence start(s)"
                f" {sorted(sent_starts - edu_starts)} not on EDU starts"
            )
        if not par_starts <= sent_starts:
            raise SegmentationError(
                f"{self.doc_id}: paragraph start(s)"
                f" {sorted(par_starts - sent_starts)} not on sentence starts"
            )


def _check_partition(doc_id: str, name: str, spans: Sequence[Span], n: int):
    if not spans:
        raise SegmentationError(f"{doc_id}: no {name} spans")
    pos = 0
    for start, end in spans:
        if start != pos or end <= start:
            raise SegmentationError(
                f"{doc_id}: {name} span ({start}, {end}) leaves a gap or"
                f" overlap at {pos}"
            )
        pos = end
    if pos != n:
        raise SegmentationError(
            f"{doc_id}: {name} spans cover {pos} of {n} characters"
        )


def parse_segmented_line(line: str) -> SegmentedText:
    record = json.loads(line)
    return SegmentedText(
        doc_id=str(record["doc_id"]),
        text=str(record["text"]),
        edus=tuple((int(s), int(e)) for s, e in record["edus"]),
        sentences=tuple((int(s), int(e)) for s, e in record["sentences"]),
        paragraphs=tuple((int(s), int(e)) for s, e in record["paragraphs"]),
    )


def load_segmented(path) -> list[SegmentedText]:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                docs.append(parse_segmented_line(line))
            except (ValueError, KeyError, TypeError) as exc:
                raise SegmentationError(f"line {lineno}: {exc}") from exc
    if not docs:
        raise SegmentationError(f"no documents in {path}")
    return docs


def build_segmented(
    doc_id: str, paragraphs: Sequence[Sequence[Sequence[str]]]
) -> SegmentedText:
    """Assemble a SegmentedText from nested EDU strings.

    ``paragraphs`` is a list of paragraphs, each a list of sentences, each a
    list of EDU strings. EDUs are concatenated verbatim, so include any
    separating whitespace in the EDU strings themselves (conventionally at
    the start of each non-initial EDU).
    """
    text_parts: list[str] = []
    edus: list[Span] = []
    sentences: list[Span] = []
    pars: list[Span] = []
    pos = 0
    for par in paragraphs:
        par_start = pos
        for sent in par:
            sent_start = pos
            for edu in sent:
                text_parts.append(edu)
                edus.append((pos, pos + len(edu)))
                pos += len(edu)
            sentences.append((sent_start, pos))
        pars.append((par_start, pos))
    return SegmentedText(
        doc_id=doc_id,
        text="".join(text_parts),
        edus=tuple(edus),
        sentences=tuple(sentences),
        paragraphs=tuple(pars),
    )
