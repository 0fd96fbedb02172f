"""Causal language models behind a small common interface.

Two backends:

* ``cache-bigram`` — a self-contained interpolated model (document cache +
  bigram + unigram + uniform over its subword vocabulary and an
  end-of-string event), with counts fixed at build time from an embedded
  corpus. Deterministic, dependency-free, and context-sensitive enough to
  show the classic drop in surprisal for repeated tokens.
* any other identifier — resolved as a Hugging Face causal LM through
  ``transformers`` (imported lazily); raises ModelLoadError when the
  library or the model is unavailable.

All log-probabilities are natural-log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ContextLengthExceeded, ModelLoadError
from .tokenizer import GreedyTokenizer, vocabulary_from_corpus

EOS = "<eos>"

# Embedded training text for the built-in model: a handful of plain prose
# paragraphs; each paragraph counts as one document ending in EOS.
SEED_CORPUS = """\
The old harbour town wakes slowly in the morning. Fishermen check their
nets on the quay while the market sets up along the narrow street. By noon
the market is full of voices, and the smell of bread drifts from the
bakery near the church.

Rain came early this autumn. The river rose under the stone bridge, and
the ferry stopped running for three days. People crossed by the long road
instead, grumbling about the weather and the mud on the path.

A small library stands at the corner of the square. The librarian keeps a
careful record of every book that leaves the building, and she knows most
readers by name. On quiet afternoons the reading room smells of dust and
old paper.

The baker starts work before dawn. He weighs the flour, feeds the oven,
and sets the first loaves out while the street lamps are still lit. His
daughter delivers bread to the café and the school before her classes.

In winter the garden rests. The gardener turns the soil once, covers the
beds with straw, and waits. Snow settles on the fence posts, and the cat
watches the birds from the kitchen window.

The train to the city runs twice a day. Commuters drink coffee on the
platform and talk about prices, football, and the new housing plan. When
the train is late, the stationmaster rings the café to send more coffee.

Every festival ends with music on the water. Boats carry lanterns out past
the breakwater, the band plays on the pier, and children count the lights
until the cold sends everyone home to bed.
"""

def _paragraphs(text: str) -> list[str]:
    return [p for p in text.split("\n\n") if p.strip()]


@dataclass(frozen=True)
class StepScore:
    """Log-probability of one piece given everything before it."""

    piece: str
    start: int
    end: int
    logprob: float


class CacheBigramModel:
    """Interpolated cache/bigram/unigram/uniform model over subword pieces."""

    model_id = "cache-bigram"
    max_context = None  # unlimited
    log_base = "e"

    CACHE_WEIGHT = 0.5
    BIGRAM_WEIGHT = 0.25
    UNIGRAM_WEIGHT = 0.2
    UNIFORM_WEIGHT = 0.05

    def __init__(self, corpus: str = SEED_CORPUS):
        self.tokenizer = GreedyTokenizer(vocabulary_from_corpus(corpus))
        self._vocab = sorted(self.tokenizer.vocabulary) + [EOS]
        self._index = {piece: i for i, piece in enumerate(self._vocab)}
        self._v = len(self._vocab)
        unigram = {}
        bigram = {}
        total = 0
        for paragraph in _paragraphs(corpus):
            pieces = [p.text for p in self.tokenizer.tokenize(paragraph)] + [EOS]
            prev = None
            for piece in pieces:
                unigram[piece] = unigram.get(piece, 0) + 1
                total += 1
                if prev is not None:
                    key = (prev, piece)
                    bigram[key] = bigram.get(key, 0) + 1
                prev = piece
        self._unigram = unigram
        self._bigram = bigram
        self._total = total
        self._prev_totals = {}
        for (prev, _), count in bigram.items():
            self._prev_totals[prev] = self._prev_totals.get(prev, 0) + count

    def _unigram_p(self, piece: str) -> float:
        return (self._unigram.get(piece, 0) + 1) / (self._total + self._v)

    def _bigram_p(self, prev: str | None, piece: str) -> float:
        if prev is None:
            return self._unigram_p(piece)
        count = self._bigram.get((prev, piece), 0)
        return (count + 1) / (self._prev_totals.get(prev, 0) + self._v)

    def probability(self, piece: str, history: list[str]) -> float:
        """P(piece | history) over vocabulary + EOS; sums to 1 exactly."""
        prev = history[-1] if history else None
        cache = history.count(piece) / len(history) if history else 0.0
        if not history:
            # no cache yet: fold its weight into the unigram component
            unigram_w = self.UNIGRAM_WEIGHT + self.CACHE_WEIGHT
            cache_w = 0.0
        else:
            unigram_w = self.UNIGRAM_WEIGHT
            cache_w = self.CACHE_WEIGHT
        return (
            cache_w * cache
            + self.BIGRAM_WEIGHT * self._bigram_p(prev, piece)
            + unigram_w * self._unigram_p(piece)
            + self.UNIFORM_WEIGHT / self._v
        )

    def score_document(self, text: str) -> tuple[list[StepScore], float]:
        """Per-piece log-probabilities plus the final EOS log-probability."""
        pieces = self.tokenizer.tokenize(text)
        history: list[str] = []
        steps = []
        for piece in pieces:
            logprob = math.log(self.probability(piece.text, history))
            steps.append(StepScore(piece.text, piece.start, piece.end, logprob))
            history.append(piece.text)
        eos_logprob = math.log(self.probability(EOS, history))
        return steps, eos_logprob

    def document_logprob(self, text: str) -> float:
        """Natural log of the full document probability (with EOS)."""
        steps, eos_logprob = self.score_document(text)
        return sum(s.logprob for s in steps) + eos_logprob


class HFCausalModel:
    """Hugging Face causal LM wrapper; loaded lazily by model id."""

    log_base = "e"

    def __init__(self, model_id: str):
        try:
            import torch
            from transformers import AutoModelForCausalLM, AutoTokenizer
        except ImportError as exc:  # pragma: no cover - env without torch
            raise ModelLoadError(f"transformers/torch unavailable: {exc}") from exc
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_id)
            self._model = AutoModelForCausalLM.from_pretrained(model_id)
        except Exception as exc:
            raise ModelLoadError(f"cannot load {model_id!r}: {exc}") from exc
        self._model.eval()
        self._torch = torch
        self.model_id = model_id
        self.max_context = getattr(self._model.config, "max_position_embeddings", None)

    def score_document(self, text: str) -> tuple[list[StepScore], float]:
        torch = self._torch
        bos = self._tokenizer.bos_token_id
        eos_id = self._tokenizer.eos_token_id
        if bos is None:
            raise ModelLoadError(
                f"{self.model_id} has no BOS token; the first token's"
                " conditional probability is undefined"
            )
        if eos_id is None:
            raise ModelLoadError(f"{self.model_id} has no EOS token")
        encoding = self._tokenizer(
            text, return_offsets_mapping=True, add_special_tokens=False
        )
        ids = encoding["input_ids"]
        offsets = encoding["offset_mapping"]
        if self.max_context is not None and len(ids) + 1 > self.max_context:
            raise ContextLengthExceeded(
                f"{len(ids)} tokens exceed the {self.max_context}-token window"
            )
        input_ids = [bos] + ids
        with torch.no_grad():
            logits = self._model(torch.tensor([input_ids])).logits[0]
        logprobs = torch.log_softmax(logits.double(), dim=-1)
        steps = []
        for t, (tok, (start, end)) in enumerate(zip(ids, offsets)):
            piece = text[start:end]
            steps.append(StepScore(piece, start, end, float(logprobs[t, tok])))
        eos_logprob = float(logprobs[len(ids), eos_id])
        return steps, eos_logprob

    def document_logprob(self, text: str) -> float:
        steps, eos_logprob = self.score_document(text)
        return sum(s.logprob for s in steps) + eos_logprob


def load_model(model_id: str):
    if model_id == CacheBigramModel.model_id:
        return CacheBigramModel()
    return HFCausalModel(model_id)
