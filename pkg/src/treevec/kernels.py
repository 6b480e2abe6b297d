"""Training kernels: compiled (Cython + BLAS) with a pure-NumPy fallback.

Both kernels process a contiguous range of sentences per call and share the
same semantics: one window draw per position from the same 64-bit LCG, pairs
visited left to right, hierarchical-softmax updates per pair.  Numeric
results differ only by float32 rounding (summation order), so single-worker
runs are bit-reproducible per kernel but not across kernels.

The compiled kernel is selected at import when available; ``exact_sigmoid``
routes to the NumPy kernel, which is the only one honoring it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import model
from .corpus import EncodedCorpus
from .huffman import HuffmanCoding
from .model import ModelParams, cbow_step, skipgram_step

try:
    from ._inner import train_chunk as _train_chunk_compiled
except ImportError:
    _train_chunk_compiled = None

__all__ = [
    "COMPILED_KERNEL_AVAILABLE",
    "KERNEL_NAMES",
    "Lcg",
    "sample_window",
    "TrainJob",
    "resolve_kernel",
    "get_kernel",
    "train_chunk_numpy",
    "train_chunk_cython",
]

COMPILED_KERNEL_AVAILABLE = _train_chunk_compiled is not None
KERNEL_NAMES = ("cython", "numpy")

_MASK64 = (1 << 64) - 1


class Lcg:
    """The 64-bit linear congruential generator both kernels draw from.

    Kept deliberately tiny so its state (one integer) can live in a
    checkpoint and be advanced identically from C.
    """

    MULTIPLIER = 25214903917
    INCREMENT = 11

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def _next(self) -> int:
        self.state = (self.state * self.MULTIPLIER + self.INCREMENT) & _MASK64
        return self.state

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in [a, b], matching random.Random.randint."""
        return a + self._next() % (b - a + 1)


def sample_window(max_window: int, rng) -> int:
    """Draw the per-position context radius R uniform on {1, ..., max_window}.

    ``rng`` is anything with a ``randint(a, b)`` method (inclusive bounds),
    e.g. random.Random or :class:`Lcg`.
    """
    if max_window < 1:
        raise ValueError("max_window must be >= 1")
    return rng.randint(1, max_window)


@dataclass
class TrainJob:
    """Everything a kernel needs, bundled once per training run."""

    params: ModelParams
    coding: HuffmanCoding
    corpus: EncodedCorpus
    sg: bool
    window: int
    static_window: bool = False
    mean_backprop: bool = False
    exact_sigmoid: bool = False


def train_chunk_numpy(job: TrainJob, sent_lo: int, sent_hi: int, alpha: float, state: int):
    """Train sentences [sent_lo, sent_hi) and return (words, pairs, skipped, state)."""
    rng = Lcg(0)
    rng.state = state
    params, coding, corpus = job.params, job.coding, job.corpus
    step_kwargs = dict(exact_sigmoid=job.exact_sigmoid, mean_backprop=job.mean_backprop)
    words = pairs = skipped = 0
    for s in range(sent_lo, sent_hi):
        sent = corpus.sentence(s)
        n = len(sent)
        for pos in range(n):
            words += 1
            r = job.window if job.static_window else sample_window(job.window, rng)
            lo = max(0, pos - r)
            hi = min(n, pos + r + 1)
            if hi - lo <= 1:  # no in-sentence neighbor
                skipped += 1
                continue
            if job.sg:
                center = int(sent[pos])
                for pos2 in range(lo, hi):
                    if pos2 == pos:
                        continue
                    skipgram_step(params, coding, center, int(sent[pos2]), alpha, **step_kwargs)
                    pairs += 1
            else:
                context = [int(sent[p]) for p in range(lo, hi) if p != pos]
                cbow_step(params, coding, context, int(sent[pos]), alpha, **step_kwargs)
                pairs += 1
    return words, pairs, skipped, rng.state


def train_chunk_cython(job: TrainJob, sent_lo: int, sent_hi: int, alpha: float, state: int):
    """Same contract as :func:`train_chunk_numpy`, via the compiled kernel."""
    if _train_chunk_compiled is None:
        raise RuntimeError("compiled kernel not available; install with a C toolchain")
    return _train_chunk_compiled(
        1 if job.sg else 0,
        job.params.input_vectors,
        job.params.node_vectors,
        job.corpus.tokens,
        job.corpus.offsets,
        sent_lo,
        sent_hi,
        job.coding.lengths,
        job.coding.codes,
        job.coding.points,
        job.window,
        1 if job.static_window else 0,
        1 if job.mean_backprop else 0,
        alpha,
        state,
    )


_KERNELS = {"cython": train_chunk_cython, "numpy": train_chunk_numpy}


def resolve_kernel(name: str = "auto", exact_sigmoid: bool = False) -> str:
    """Pick the kernel to run: 'auto' prefers the compiled one."""
    if exact_sigmoid:
        if name == "cython":
            raise ValueError("exact_sigmoid is only supported by the numpy kernel")
        return "numpy"
    if name == "auto":
        return "cython" if COMPILED_KERNEL_AVAILABLE else "numpy"
    if name not in KERNEL_NAMES:
        raise ValueError(f"unknown kernel {name!r}; choose from {('auto',) + KERNEL_NAMES}")
    if name == "cython" and not COMPILED_KERNEL_AVAILABLE:
        raise RuntimeError("compiled kernel requested but not built")
    return name


def get_kernel(name: str):
    return _KERNELS[name]
