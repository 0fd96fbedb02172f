"""Boundary surprisal statistics, the permutation control, and a periodogram.

Boundary cells collect tokens in fixed windows on each side of interior
unit boundaries; the non-boundary cell excludes a one-token buffer around
every boundary regardless of the window size, so the before/after cells of
both window sizes are compared against the same reference tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .contours import (
    DocumentContour,
    NESTED_STRUCTURES,
    Structure,
    boundary_positions,
    replace_surprisals,
)


@dataclass(frozen=True)
class BoundaryCell:
    """Mean/sd/count of surprisal before, after, and away from boundaries."""

    structure: Structure
    window: int
    mean_before: float
    sd_before: float
    n_before: int
    mean_after: float
    sd_after: float
    n_after: int
    mean_non_boundary: float
    sd_non_boundary: float
    n_non_boundary: int


def _mean_sd(values: list[float]) -> tuple[float, float]:
    if not values:
        return float("nan"), float("nan")
    arr = np.asarray(values)
    sd = float(arr.std(ddof=1)) if len(arr) > 1 else float("nan")
    return float(arr.mean()), sd


def boundary_stats(
    docs: Sequence[DocumentContour], structure: Structure, window: int
) -> BoundaryCell:
    """Surprisal summary around the interior boundaries of one structure.

    Before-cell: indices b-window .. b-1 of some boundary b; after-cell:
    b .. b+window-1; non-boundary: tokens farther than one position from
    every boundary. A token counts once per cell even when two boundaries'
    windows overlap it.
    """
    if window not in (1, 2):
        raise ValueError(f"window must be 1 or 2, got {window}")
    before: list[float] = []
    after: list[float] = []
    non_boundary: list[float] = []
    for doc in docs:
        n = doc.n_tokens
        s = doc.surprisals()
        bounds = boundary_positions(doc, structure)
        before_idx: set[int] = set()
        after_idx: set[int] = set()
        buffer_idx: set[int] = set()
        for b in bounds:
            before_idx.update(range(max(0, b - window), b))
            after_idx.update(range(b, min(n, b + window)))
            buffer_idx.update(i for i in (b - 1, b) if 0 <= i < n)
        before.extend(s[i] for i in sorted(before_idx))
        after.extend(s[i] for i in sorted(after_idx))
        non_boundary.extend(
            s[i] for i in range(n) if i not in buffer_idx
        )
    mb, sb = _mean_sd(before)
    ma, sa = _mean_sd(after)
    mn, sn = _mean_sd(non_boundary)
    return BoundaryCell(
        structure=structure,
        window=window,
        mean_before=mb,
        sd_before=sb,
        n_before=len(before),
        mean_after=ma,
        sd_after=sa,
        n_after=len(after),
        mean_non_boundary=mn,
        sd_non_boundary=sn,
        n_non_boundary=len(non_boundary),
    )


def boundary_report(
    docs: Sequence[DocumentContour],
    structures: Sequence[Structure] = NESTED_STRUCTURES,
    windows: Sequence[int] = (1, 2),
) -> list[BoundaryCell]:
    """All structure-by-window boundary cells, in a fixed row order."""
    return [
        boundary_stats(docs, structure, window)
        for window in windows
        for structure in structures
    ]


def permute_surprisal(
    docs: Sequence[DocumentContour], seed: int
) -> list[DocumentContour]:
    """Shuffle surprisal values uniformly within each document.

    Texts, lengths, and unit ids are untouched; each document gets its own
    generator derived from the seed and the document's position, so results
    do not depend on scheduling.
    """
    permuted = []
    for ordinal, doc in enumerate(docs):
        rng = np.random.default_rng(seed + ordinal)
        values = doc.surprisals()[rng.permutation(doc.n_tokens)]
        permuted.append(replace_surprisals(doc, values))
    return permuted


def spectrum(doc: DocumentContour) -> np.ndarray:
    """Periodogram of the mean-centered contour: |DFT|^2 for bins 0..n//2."""
    x = doc.surprisals()
    if len(x) < 2:
        raise ValueError("spectrum needs at least 2 tokens")
    return np.abs(np.fft.rfft(x - x.mean())) ** 2
