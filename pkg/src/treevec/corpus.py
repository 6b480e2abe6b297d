"""Corpus streaming, vocabulary construction and integer encoding.

Tokenization is whitespace-only and case-sensitive unless ``lowercase`` is
requested.  A newline ends a sentence; training windows never cross sentence
boundaries.  Out-of-vocabulary tokens are dropped during encoding (there is
no UNK symbol).
"""

from __future__ import annotations

import array
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "TokenizeStats",
    "Vocabulary",
    "EncodedCorpus",
    "tokenize",
    "build_vocabulary",
    "encode",
]


@dataclass
class TokenizeStats:
    """Counters filled in by :func:`tokenize` for the run report."""

    malformed_tokens: int = 0
    tokens: int = 0
    sentences: int = 0


def _iter_lines(stream) -> Iterator:
    if isinstance(stream, Path):
        with open(stream, "rb") as handle:
            yield from handle
        return
    if isinstance(stream, (str, bytes)):
        yield from stream.splitlines()
        return
    # file object or any iterable of lines
    yield from stream


def tokenize(stream, lowercase: bool = False, stats: TokenizeStats | None = None) -> Iterator[list[str]]:
    """Yield one list of tokens per input line (= per sentence).

    ``stream`` may be a str, bytes, a Path, an open file (text or binary) or
    any iterable of lines.  Tokens are maximal runs of non-whitespace
    characters.  For byte input, a token whose bytes are not valid UTF-8 is
    dropped and counted in ``stats.malformed_tokens``; the rest of the line
    is processed normally.
    """
    if stats is None:
        stats = TokenizeStats()
    for line in _iter_lines(stream):
        if isinstance(line, bytes):
            sentence = []
            for raw in line.split():
                try:
                    token = raw.decode("utf-8")
                except UnicodeDecodeError:
                    stats.malformed_tokens += 1
                    continue
                sentence.append(token.lower() if lowercase else token)
        else:
            sentence = line.lower().split() if lowercase else line.split()
        stats.tokens += len(sentence)
        stats.sentences += 1
        yield sentence


class Vocabulary:
    """Word/index mapping with counts, ordered by descending frequency.

    ``words[i]`` and ``counts[i]`` form the i-th entry; ``index`` is the
    exact inverse of the entry order.  Ties in count keep first-occurrence
    order from the corpus scan, which also fixes the Huffman tree downstream.
    """

    def __init__(self, words: list[str], counts) -> None:
        self.words = list(words)
        self.counts = np.asarray(counts, dtype=np.int64)
        if len(self.words) != len(self.counts):
            raise ValueError("words and counts length mismatch")
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ValueError("duplicate word in vocabulary")
        self.total_tokens = int(self.counts.sum())

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def __repr__(self) -> str:
        return f"Vocabulary(V={len(self.words)}, total_tokens={self.total_tokens})"

    @property
    def entries(self) -> list[tuple[str, int]]:
        return [(w, int(c)) for w, c in zip(self.words, self.counts)]

    def save(self, destination) -> None:
        """Write one "word count" line per entry, in entry order."""
        with open(destination, "w", encoding="utf-8") as out:
            for word, count in zip(self.words, self.counts):
                out.write(f"{word} {int(count)}\n")

    @classmethod
    def load(cls, source) -> "Vocabulary":
        """Rebuild from :meth:`save` output; indices come from line order."""
        words, counts = [], []
        with open(source, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                parts = line.split()
                if not parts:
                    continue
                if len(parts) != 2:
                    raise ValueError(f"line {lineno}: expected 'word count', got {line!r}")
                words.append(parts[0])
                counts.append(int(parts[1]))
        return cls(words, counts)


def build_vocabulary(
    sentences: Iterable[list[str]],
    min_count: int = 1,
    max_vocab: int | None = None,
) -> Vocabulary:
    """Count tokens and keep those seen at least ``min_count`` times.

    ``max_vocab`` additionally caps the result to the top-K most frequent
    surviving words.  Entries are sorted by count descending, ties by first
    occurrence in the scan.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if max_vocab is not None and max_vocab < 1:
        raise ValueError("max_vocab must be >= 1")
    counts: dict[str, int] = {}
    for sentence in sentences:
        for token in sentence:
            counts[token] = counts.get(token, 0) + 1
    # dict preserves first-occurrence order; stable sort keeps it within ties
    kept = [(w, c) for w, c in counts.items() if c >= min_count]
    kept.sort(key=lambda item: item[1], reverse=True)
    if max_vocab is not None:
        kept = kept[:max_vocab]
    if not kept:
        raise ValueError("no words survive min_count")
    return Vocabulary([w for w, _ in kept], [c for _, c in kept])


@dataclass
class EncodedCorpus:
    """Sentences as word indices, stored flat for cheap sharing with workers.

    Sentence ``i`` is ``tokens[offsets[i]:offsets[i + 1]]``.  Empty sentences
    (e.g. all tokens out of vocabulary) are retained as empty ranges.
    """

    tokens: np.ndarray  # int32, all values < V
    offsets: np.ndarray  # int64, len = n_sentences + 1, offsets[0] == 0

    @property
    def n_sentences(self) -> int:
        return len(self.offsets) - 1

    @property
    def n_tokens(self) -> int:
        return int(self.offsets[-1])

    def __len__(self) -> int:
        return self.n_sentences

    def sentence(self, i: int) -> np.ndarray:
        return self.tokens[self.offsets[i] : self.offsets[i + 1]]

    def __iter__(self) -> Iterator[np.ndarray]:
        for i in range(self.n_sentences):
            yield self.sentence(i)


def encode(sentences: Iterable[list[str]], vocab: Vocabulary) -> EncodedCorpus:
    """Replace tokens by vocabulary indices, silently dropping OOV tokens."""
    tokens = array.array("i")
    offsets = array.array("q", [0])
    index = vocab.index
    for sentence in sentences:
        tokens.extend(index[t] for t in sentence if t in index)
        offsets.append(len(tokens))
    return EncodedCorpus(
        tokens=np.frombuffer(tokens, dtype=np.int32).copy() if tokens else np.empty(0, np.int32),
        offsets=np.frombuffer(offsets, dtype=np.int64).copy(),
    )
