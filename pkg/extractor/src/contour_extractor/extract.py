"""Turn segmented raw texts into contour-file lines.

Each subword gets the negative log-probability of the piece given the full
preceding document context, and is assigned to the EDU/sentence/paragraph
containing its first character. An end-of-string row (empty text, zero
characters, the document's final unit ids) is appended unless disabled.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

from .errors import UnalignableSpan
from .models import StepScore
from .segments import SegmentedText


@dataclass(frozen=True)
class UnitIds:
    edu: int
    sent: int
    par: int


def align_units(
    offsets: Sequence[tuple[int, int]], seg: SegmentedText
) -> list[UnitIds]:
    """Unit ids per subword, by the unit containing its first character."""
    edu_starts = [s for s, _ in seg.edus]
    sent_starts = [s for s, _ in seg.sentences]
    par_starts = [s for s, _ in seg.paragraphs]
    ids = []
    for start, _ in offsets:
        if not 0 <= start < len(seg.text):
            raise UnalignableSpan(
                f"{seg.doc_id}: subword start {start} outside the text"
            )
        ids.append(
            UnitIds(
                edu=bisect_right(edu_starts, start) - 1,
                sent=bisect_right(sent_starts, start) - 1,
                par=bisect_right(par_starts, start) - 1,
            )
        )
    _check_contiguous(seg, "edu", [u.edu for u in ids], len(seg.edus))
    _check_contiguous(seg, "sent", [u.sent for u in ids], len(seg.sentences))
    _check_contiguous(seg, "par", [u.par for u in ids], len(seg.paragraphs))
    return ids


def _check_contiguous(seg: SegmentedText, name: str, ids: list[int], n_units: int):
    if not ids:
        raise UnalignableSpan(f"{seg.doc_id}: no subwords to align")
    if ids[0] != 0:
        raise UnalignableSpan(
            f"{seg.doc_id}: first subword falls in {name} {ids[0]}, not 0"
        )
    for prev, cur in zip(ids, ids[1:]):
        if cur - prev not in (0, 1):
            raise UnalignableSpan(
                f"{seg.doc_id}: {name} {prev + 1} contains no subword start"
                " (unit shorter than one subword)"
            )
    if ids[-1] != n_units - 1:
        raise UnalignableSpan(
            f"{seg.doc_id}: trailing {name} unit(s) contain no subword start"
        )


def contour_record(
    seg: SegmentedText, steps: Sequence[StepScore], eos_logprob: float | None
) -> dict:
    """The contour-file record for one scored document."""
    ids = align_units([(s.start, s.end) for s in steps], seg)
    tokens = []
    for i, (step, unit) in enumerate(zip(steps, ids)):
        tokens.append(
            {
                "i": i,
                "text": step.piece,
                "surprisal": -step.logprob,
                "n_chars": step.end - step.start,
                "edu": unit.edu,
                "sent": unit.sent,
                "par": unit.par,
            }
        )
    if eos_logprob is not None:
        last = ids[-1]
        tokens.append(
            {
                "i": len(steps),
                "text": "",
                "surprisal": -eos_logprob,
                "n_chars": 0,
                "edu": last.edu,
                "sent": last.sent,
                "par": last.par,
            }
        )
    return {"doc_id": seg.doc_id, "tokens": tokens}


def extract_surprisal(seg: SegmentedText, model, emit_eos: bool = True) -> dict:
    """Score one document with the model and build its contour record."""
    steps, eos_logprob = model.score_document(seg.text)
    return contour_record(seg, steps, eos_logprob if emit_eos else None)


def extract_corpus(
    docs: Sequence[SegmentedText], model, emit_eos: bool = True
) -> tuple[list[dict], dict]:
    """Records for every document plus the run metadata sidecar."""
    records = [extract_surprisal(seg, model, emit_eos) for seg in docs]
    meta = {
        "model": model.model_id,
        "log_base": model.log_base,
        "alignment": "first-char",
        "emit_eos": emit_eos,
        "n_documents": len(records),
        "n_tokens": sum(len(r["tokens"]) for r in records),
    }
    return records, meta


def write_records(records: Sequence[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
