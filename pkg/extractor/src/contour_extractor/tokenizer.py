"""Greedy longest-match subword tokenizer with character offsets.

The vocabulary is a set of strings (typically words and space-prefixed
words harvested from a training corpus). At each position the longest
matching vocabulary entry is consumed; any character not starting a match
becomes a single-character piece, so every text tokenizes and the pieces
partition it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Piece:
    text: str
    start: int
    end: int


class GreedyTokenizer:
    def __init__(self, vocabulary):
        self.vocabulary = frozenset(vocabulary)
        self._max_len = max((len(v) for v in self.vocabulary), default=1)
        self._by_first: dict[str, list[str]] = {}
        for entry in self.vocabulary:
            if entry:
                self._by_first.setdefault(entry[0], []).append(entry)
        for entries in self._by_first.values():
            entries.sort(key=len, reverse=True)

    def tokenize(self, text: str) -> list[Piece]:
        pieces = []
        pos = 0
        n = len(text)
        while pos < n:
            match = text[pos]
            for entry in self._by_first.get(text[pos], ()):
                if text.startswith(entry, pos):
                    match = entry
                    break
            pieces.append(Piece(match, pos, pos + len(match)))
            pos += len(match)
        return pieces


def word_pretokens(text: str) -> list[str]:
    """Alphanumeric runs and single punctuation marks, whitespace dropped."""
    out = []
    current = ""
    for ch in text:
        if ch.isalnum():
            current += ch
        else:
            if current:
                out.append(current)
                current = ""
            if not ch.isspace():
                out.append(ch)
    if current:
        out.append(current)
    return out


def vocabulary_from_corpus(corpus: str) -> set[str]:
    """Words, space-prefixed words, and all single characters of the corpus."""
    vocab: set[str] = set(corpus)  # single characters, including whitespace
    for word in word_pretokens(corpus):
        vocab.add(word)
        vocab.add(" " + word)
    return vocab
