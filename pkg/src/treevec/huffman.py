"""Huffman tree over vocabulary frequencies for hierarchical softmax.

Each word gets a binary code and the matching root-first sequence of inner
node indices.  Frequent words receive short codes, so the average number of
binary decisions per prediction tracks the unigram entropy of the corpus
rather than log2(V).

Conventions (serialized models depend on these):

* Construction is the two-queue linear merge: leaves pre-sorted by ascending
  count, merged nodes appended in creation order.  When two candidates have
  equal weight the earlier-created one wins, leaves counting as created
  before inner nodes and, among equal-count leaves, the one later in the
  vocabulary (i.e. with the smaller count rank) first.
* The first (lighter) merge operand becomes bit 0, the second bit 1.
* The inner node created k-th gets index k, so the root has index V - 2.
  Paths are stored root-first; ``path[j]`` is the node where ``code[j]`` is
  decided.
"""

from __future__ import annotations

import numpy as np

from .corpus import Vocabulary

__all__ = ["HuffmanCoding", "build_huffman", "expected_code_length"]


class HuffmanCoding:
    """Per-word binary codes and inner-node paths, padded to max length.

    ``codes[w, :lengths[w]]`` holds the bits of word ``w`` and
    ``points[w, :lengths[w]]`` the inner nodes (root first) at which those
    bits are decided.  ``inner_count`` is always V - 1.
    """

    def __init__(self, lengths: np.ndarray, codes: np.ndarray, points: np.ndarray) -> None:
        self.lengths = np.asarray(lengths, dtype=np.int32)
        self.codes = np.asarray(codes, dtype=np.uint8)
        self.points = np.asarray(points, dtype=np.int32)
        self.vocab_size = len(self.lengths)
        self.inner_count = self.vocab_size - 1
        self.max_length = int(self.codes.shape[1]) if self.codes.size else 0

    def code(self, w: int) -> np.ndarray:
        return self.codes[w, : self.lengths[w]]

    def path(self, w: int) -> np.ndarray:
        return self.points[w, : self.lengths[w]]

    def __repr__(self) -> str:
        return f"HuffmanCoding(V={self.vocab_size}, max_length={self.max_length})"


def build_huffman(vocab: Vocabulary) -> HuffmanCoding:
    """Build the Huffman coding for ``vocab``; deterministic for fixed input.

    Requires V >= 2: hierarchical softmax needs at least one binary decision,
    so a single-word vocabulary has no valid coding.
    """
    V = len(vocab)
    if V == 0:
        raise ValueError("empty vocabulary")
    if V == 1:
        raise ValueError("vocabulary must contain at least 2 words")

    # Leaves in ascending-count order; within equal counts the word later in
    # the (descending-frequency) vocabulary comes first.  Walking the
    # vocabulary backwards gives exactly that.
    weight = [int(vocab.counts[V - 1 - i]) for i in range(V)]
    weight.extend([0] * (V - 1))
    parent = [0] * (2 * V - 1)
    binary = [0] * (2 * V - 1)

    pos1 = 0  # next unconsumed leaf
    pos2 = V  # next unconsumed inner node (creation order)
    for a in range(V - 1):
        picked = []
        for _ in range(2):
            # equal weights: prefer the leaf (created earlier by convention)
            if pos1 < V and (pos2 >= V + a or weight[pos1] <= weight[pos2]):
                picked.append(pos1)
                pos1 += 1
            else:
                picked.append(pos2)
                pos2 += 1
        node = V + a
        weight[node] = weight[picked[0]] + weight[picked[1]]
        parent[picked[0]] = node
        parent[picked[1]] = node
        binary[picked[1]] = 1  # heavier/later operand takes bit 1

    root = 2 * V - 2
    chains = []
    for leaf in range(V):
        chain = []
        node = leaf
        while node != root:
            chain.append(node)
            node = parent[node]
        chains.append(chain)

    max_len = max(len(c) for c in chains)
    lengths = np.zeros(V, dtype=np.int32)
    codes = np.zeros((V, max_len), dtype=np.uint8)
    points = np.zeros((V, max_len), dtype=np.int32)
    for leaf, chain in enumerate(chains):
        w = V - 1 - leaf  # leaf order was reversed vocabulary order
        lengths[w] = len(chain)
        # chain runs leaf -> child of root; reverse for root-first storage
        for j, node in enumerate(reversed(chain)):
            codes[w, j] = binary[node]
            # the decision for chain element `node` happens at its parent
            points[w, j] = parent[node] - V
    return HuffmanCoding(lengths, codes, points)


def expected_code_length(coding: HuffmanCoding, vocab: Vocabulary) -> float:
    """Frequency-weighted mean code length in bits.

    Lies in [H, H + 1) where H is the unigram entropy of the counts, i.e. it
    tracks log2 of the unigram perplexity instead of log2(V).
    """
    if coding.vocab_size != len(vocab):
        raise ValueError(
            f"coding built for V={coding.vocab_size}, vocabulary has V={len(vocab)}"
        )
    total = vocab.total_tokens
    if total <= 0:
        raise ValueError("vocabulary has no tokens")
    return float(np.dot(vocab.counts, coding.lengths) / total)
