"""Baseline predictors and time-scaled harmonic design-matrix blocks.

The harmonic block for a structure contains, for each order k up to that
structure's maximum, a sine and a cosine whose period equals the length of
the token's containing unit: the k-th order completes exactly k cycles per
unit. Phases are reduced with integer arithmetic ((k*t) mod L) so that the
order-L harmonic is exactly (0, 1) at every integer offset and values are
exactly periodic in the offset.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .contours import (
    ALL_STRUCTURES,
    DocumentContour,
    Structure,
    all_boundary_positions,
    unit_offsets_and_lengths,
)
from .errors import EmptyTrainingSet, MissingOrder

#: Non-harmonic predictor names, in canonical column order.
BASELINE_COLUMNS = (
    "tok_len",
    "prev_surprisal",
    "rel_pos",
    "bnd_w1",
    "bnd_w2",
    "bnd_w4",
)

#: Block names accepted by :func:`assemble_matrix`.
BASELINE_BLOCK = "baseline"
HARMONIC_BLOCKS = tuple(s.value for s in ALL_STRUCTURES)

_HARMONIC_NAME = re.compile(r"^(doc|edu|sent|par)_(sin|cos)_(\d+)$")


@dataclass(frozen=True)
class OrderSpec:
    """Maximum harmonic order per structure."""

    orders: Mapping[Structure, int]

    def __post_init__(self):
        for structure, k in self.orders.items():
            if k < 1:
                raise ValueError(f"order for {structure.value} must be >= 1, got {k}")

    def order_for(self, structure: Structure) -> int:
        if structure not in self.orders:
            raise MissingOrder(f"no harmonic order for structure {structure.value}")
        return self.orders[structure]


@dataclass(frozen=True)
class FeatureMatrix:
    """Named-column design matrix; rows are tokens across a document set."""

    values: np.ndarray
    column_names: tuple[str, ...]

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != len(self.column_names):
            raise ValueError("matrix shape does not match column names")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.column_names.index(name)]

    def select(self, names: Sequence[str]) -> "FeatureMatrix":
        """Submatrix with the given columns, in the given order."""
        idx = [self.column_names.index(n) for n in names]
        return FeatureMatrix(self.values[:, idx], tuple(names))


def parse_harmonic_name(name: str) -> tuple[Structure, str, int] | None:
    """Decompose e.g. ``edu_sin_3`` into (Structure.EDU, "sin", 3)."""
    m = _HARMONIC_NAME.match(name)
    if m is None:
        return None
    return Structure(m.group(1)), m.group(2), int(m.group(3))


def orders_from_training(
    docs: Sequence[DocumentContour], structures: Iterable[Structure]
) -> OrderSpec:
    """Set each structure's maximum order to its longest unit in ``docs``."""
    docs = list(docs)
    if not docs:
        raise EmptyTrainingSet("no training documents")
    orders: dict[Structure, int] = {}
    for structure in structures:
        orders[structure] = max(
            span.length for doc in docs for span in doc.spans[structure]
        )
    return OrderSpec(orders)


def harmonic_pair(
    offsets: np.ndarray, lengths: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """sin and cos of 2*pi*k*offset/length, phase-reduced in integers."""
    phase = (k * offsets.astype(np.int64)) % lengths
    angle = 2.0 * np.pi * phase / lengths
    return np.sin(angle), np.cos(angle)


def harmonic_features(
    doc: DocumentContour, structure: Structure, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-token (sin, cos) of order k scaled to the containing unit.

    For structure=document the unit is the whole document, which makes the
    sinusoid a function of relative rather than absolute position.
    """
    offsets, lengths = unit_offsets_and_lengths(doc, structure)
    return harmonic_pair(offsets, lengths, k)


def boundary_flags(doc: DocumentContour, window: int) -> np.ndarray:
    """1.0 for tokens within ``window`` tokens of any structural boundary.

    A boundary b sits between tokens b-1 and b; the flagged indices are
    b-window .. b+window-1 (the window tokens on each side).
    """
    flags = np.zeros(doc.n_tokens, dtype=float)
    for b in all_boundary_positions(doc):
        flags[max(0, b - window) : b + window] = 1.0
    return flags


def baseline_features(doc: DocumentContour) -> np.ndarray:
    """Per-token baseline predictor rows, columns as in BASELINE_COLUMNS."""
    n = doc.n_tokens
    out = np.empty((n, len(BASELINE_COLUMNS)), dtype=float)
    out[:, 0] = [t.n_chars for t in doc.tokens]
    s = doc.surprisals()
    out[0, 1] = 0.0
    out[1:, 1] = s[:-1]
    out[:, 2] = np.arange(n) / n
    out[:, 3] = boundary_flags(doc, 1)
    out[:, 4] = boundary_flags(doc, 2)
    out[:, 5] = boundary_flags(doc, 4)
    return out


def _harmonic_block(
    doc: DocumentContour, structure: Structure, max_order: int
) -> np.ndarray:
    offsets, lengths = unit_offsets_and_lengths(doc, structure)
    orders = np.arange(1, max_order + 1, dtype=np.int64)
    phase = (orders[:, None] * offsets[None, :]) % lengths[None, :]
    angle = 2.0 * np.pi * phase / lengths[None, :]
    block = np.empty((doc.n_tokens, 2 * max_order), dtype=float)
    block[:, 0::2] = np.sin(angle).T
    block[:, 1::2] = np.cos(angle).T
    return block


def harmonic_column_names(structure: Structure, max_order: int) -> list[str]:
    names = []
    for k in range(1, max_order + 1):
        names.append(f"{structure.value}_sin_{k}")
        names.append(f"{structure.value}_cos_{k}")
    return names


def matrix_column_names(
    blocks: Iterable[str], orders: OrderSpec | None
) -> tuple[str, ...]:
    """Column names :func:`assemble_matrix` produces for these blocks."""
    blocks = set(blocks)
    unknown = blocks - {BASELINE_BLOCK, *HARMONIC_BLOCKS}
    if unknown:
        raise ValueError(f"unknown feature blocks {sorted(unknown)}")
    names = ["intercept"]
    if BASELINE_BLOCK in blocks:
        names.extend(BASELINE_COLUMNS)
    for structure in (s for s in ALL_STRUCTURES if s.value in blocks):
        if orders is None:
            raise MissingOrder(
                f"harmonic block {structure.value} requested without an order"
            )
        names.extend(harmonic_column_names(structure, orders.order_for(structure)))
    return tuple(names)


def assemble_matrix(
    docs: Sequence[DocumentContour],
    blocks: Iterable[str],
    orders: OrderSpec | None = None,
) -> FeatureMatrix:
    """Stack requested feature blocks for all tokens of ``docs``.

    Rows follow document order then token order; the intercept column is
    always present. ``blocks`` is a subset of {"baseline", "doc", "edu",
    "sent", "par"}; every harmonic block needs an order in ``orders``.
    """
    blocks = set(blocks)
    names = list(matrix_column_names(blocks, orders))
    structures = [s for s in ALL_STRUCTURES if s.value in blocks]

    rows = []
    for doc in docs:
        parts = [np.ones((doc.n_tokens, 1))]
        if BASELINE_BLOCK in blocks:
            parts.append(baseline_features(doc))
        for structure in structures:
            parts.append(
                _harmonic_block(doc, structure, orders.order_for(structure))
            )
        rows.append(np.hstack(parts))
    values = (
        np.vstack(rows) if rows else np.empty((0, len(names)), dtype=float)
    )
    return FeatureMatrix(values, tuple(names))


def surprisal_target(docs: Sequence[DocumentContour]) -> np.ndarray:
    """Concatenated surprisal vector in the same row order as the matrix."""
    if not docs:
        return np.empty(0, dtype=float)
    return np.concatenate([doc.surprisals() for doc in docs])


def columns_by_name(
    docs: Sequence[DocumentContour], names: Sequence[str]
) -> FeatureMatrix:
    """Build exactly the named columns, e.g. to predict with a refit model."""
    parts = []
    for doc in docs:
        baseline = None
        cols = np.empty((doc.n_tokens, len(names)), dtype=float)
        for j, name in enumerate(names):
            if name == "intercept":
                cols[:, j] = 1.0
            elif name in BASELINE_COLUMNS:
                if baseline is None:
                    baseline = baseline_features(doc)
                cols[:, j] = baseline[:, BASELINE_COLUMNS.index(name)]
            else:
                parsed = parse_harmonic_name(name)
                if parsed is None:
                    raise ValueError(f"unknown column name {name!r}")
                structure, kind, k = parsed
                sin, cos = harmonic_features(doc, structure, k)
                cols[:, j] = sin if kind == "sin" else cos
        parts.append(cols)
    return FeatureMatrix(np.vstack(parts), tuple(names))
