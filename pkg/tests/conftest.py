import math

import numpy as np
import pytest
from hypothesis import strategies as st

from contour_harmonics.contours import (
    DocumentContour,
    Structure,
    TokenRecord,
    validate_document,
)
from contour_harmonics.synthetic import SyntheticSpec, generate_synthetic


def make_doc(
    edu_ids,
    sent_ids=None,
    par_ids=None,
    surprisals=None,
    doc_id="doc",
    n_chars=None,
):
    """Document from id sequences; sentence/paragraph default to one unit."""
    n = len(edu_ids)
    sent_ids = sent_ids if sent_ids is not None else [0] * n
    par_ids = par_ids if par_ids is not None else [0] * n
    surprisals = surprisals if surprisals is not None else [1.0] * n
    n_chars = n_chars if n_chars is not None else [3] * n
    tokens = tuple(
        TokenRecord(
            index=t,
            text=f"w{t}",
            surprisal=float(surprisals[t]),
            n_chars=int(n_chars[t]),
            edu_id=int(edu_ids[t]),
            sent_id=int(sent_ids[t]),
            par_id=int(par_ids[t]),
        )
        for t in range(n)
    )
    return DocumentContour(doc_id=doc_id, tokens=tokens)


def ids_from_group_sizes(sizes):
    """[2, 3] -> [0, 0, 1, 1, 1]"""
    out = []
    for unit, size in enumerate(sizes):
        out.extend([unit] * size)
    return out


@st.composite
def nested_documents(draw, max_edus=8, max_edu_len=6):
    """Random valid documents: EDU lengths grouped into sentences/paragraphs."""
    edu_lens = draw(
        st.lists(st.integers(1, max_edu_len), min_size=1, max_size=max_edus)
    )
    n_edus = len(edu_lens)
    sent_sizes = draw(_partitions(n_edus))
    par_sizes = draw(_partitions(len(sent_sizes)))
    edu_ids = ids_from_group_sizes(edu_lens)
    sent_of_edu = ids_from_group_sizes(sent_sizes)
    par_of_sent = ids_from_group_sizes(par_sizes)
    sent_ids = [sent_of_edu[e] for e in edu_ids]
    par_ids = [par_of_sent[s] for s in sent_ids]
    n = len(edu_ids)
    surprisals = draw(
        st.lists(
            st.floats(0.0, 30.0, allow_nan=False), min_size=n, max_size=n
        )
    )
    doc = make_doc(edu_ids, sent_ids, par_ids, surprisals, doc_id=draw(_doc_ids))
    return validate_document(doc)


def _partitions(total):
    """Strategy for group sizes summing to ``total``."""

    @st.composite
    def build(draw):
        sizes = []
        left = total
        while left > 0:
            size = draw(st.integers(1, min(3, left)))
            sizes.append(size)
            left -= size
        return sizes

    return build()


_doc_ids = st.uuids().map(lambda u: f"doc-{u.hex[:8]}")


def criterion_spec(seed=42):
    """The synthetic-recovery corpus: EDU harmonics k=1 (0.6) and k=2 (0.3)."""
    phase1, phase2 = 0.7, 1.9
    return SyntheticSpec(
        n_docs=50,
        edus_per_doc=(8, 12),
        tokens_per_edu=(8, 20),
        edus_per_sentence=(1, 3),
        sentences_per_paragraph=(1, 3),
        intercept=5.0,
        amplitudes={
            (Structure.EDU, 1): (
                0.6 * math.cos(phase1),
                0.6 * math.sin(phase1),
            ),
            (Structure.EDU, 2): (
                0.3 * math.cos(phase2),
                0.3 * math.sin(phase2),
            ),
        },
        noise_sd=1.0,
        seed=seed,
    )


@pytest.fixture(scope="session")
def recovery_corpus():
    return generate_synthetic(criterion_spec())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
