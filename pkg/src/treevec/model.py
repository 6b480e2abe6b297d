"""Trainable parameters and hierarchical-softmax steps for CBOW / skip-gram.

The output distribution factorizes over the Huffman path of the target word:

    p(w | h) = prod_j sigma(s_j * <node[path_j], h>),   s_j = +1 if bit_j == 0 else -1

One SGD step on -log p(w | h) updates, for each path node with activation
f = sigma(<node, h>) and label t = 1 - bit:

    e    += lr * (t - f) * node        (accumulated error for the input side)
    node += lr * (t - f) * h

and finally adds e to the input vector(s) that formed h.  For CBOW, h is the
mean of the context vectors and the same e is added to each context vector
unscaled; dividing by the context size instead (the exact gradient of the
mean) is available via ``mean_backprop`` for gradient checking.

The fast path evaluates sigma through a 1000-entry table on [-6, 6] and
skips a node entirely when its pre-activation leaves that range;
``exact_sigmoid=True`` computes everything in float64 with the true sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .huffman import HuffmanCoding

__all__ = [
    "REAL",
    "MAX_EXP",
    "SIGMOID_TABLE_SIZE",
    "ARCHITECTURES",
    "ModelParams",
    "TrainingConfig",
    "ComplexityEstimate",
    "init_params",
    "sigmoid",
    "table_sigmoid",
    "word_probability",
    "log_word_probability",
    "loss",
    "step_pair",
    "cbow_step",
    "skipgram_step",
    "complexity_estimate",
]

REAL = np.float32

MAX_EXP = 6.0
SIGMOID_TABLE_SIZE = 1000
# table[i] = sigma(-6 + 12 * i / 999); endpoints hold sigma(+-6) exactly
SIGMOID_TABLE = 1.0 / (
    1.0 + np.exp(-(np.arange(SIGMOID_TABLE_SIZE) / (SIGMOID_TABLE_SIZE - 1) * 2.0 - 1.0) * MAX_EXP)
)

ARCHITECTURES = ("cbow", "skipgram")


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))


def table_sigmoid(x):
    """Table lookup with nearest-entry rounding; input must be in [-6, 6]."""
    idx = np.rint((np.asarray(x) + MAX_EXP) * ((SIGMOID_TABLE_SIZE - 1) / (2 * MAX_EXP)))
    return SIGMOID_TABLE[idx.astype(np.int64)]


@dataclass
class ModelParams:
    """Input word vectors (V x D) and inner-node vectors ((V - 1) x D)."""

    input_vectors: np.ndarray
    node_vectors: np.ndarray
    dim: int

    @property
    def vocab_size(self) -> int:
        return self.input_vectors.shape[0]

    def copy(self) -> "ModelParams":
        return ModelParams(self.input_vectors.copy(), self.node_vectors.copy(), self.dim)


@dataclass
class TrainingConfig:
    """Knobs for a training run; defaults favor reproducibility over speed."""

    architecture: str = "cbow"
    dim: int = 300
    window: int = 5
    epochs: int = 1
    alpha: float = 0.025
    min_count: int = 5
    workers: int = 1
    seed: int = 1
    lr_floor_ratio: float = 1e-4
    static_window: bool = False  # disable per-position window sampling
    mean_backprop: bool = False  # scale the CBOW error by 1/|context|
    exact_sigmoid: bool = False  # exact sigma everywhere (forces NumPy kernel)

    def __post_init__(self) -> None:
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"architecture must be one of {ARCHITECTURES}, got {self.architecture!r}")
        for name in ("dim", "window", "epochs", "min_count", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not 0 < self.lr_floor_ratio < 1:
            raise ValueError("lr_floor_ratio must be in (0, 1)")

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, data: dict) -> "TrainingConfig":
        return cls(**data)


def init_params(vocab_size: int, dim: int, seed: int) -> ModelParams:
    """Input vectors i.i.d. uniform on [-0.5/D, 0.5/D]; node vectors zero.

    Zero node vectors make the initial distribution exactly the
    Huffman-implied 2^(-L_w), which the tests rely on.
    """
    if vocab_size < 2:
        raise ValueError("vocab_size must be >= 2")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    bound = 0.5 / dim
    input_vectors = rng.uniform(-bound, bound, size=(vocab_size, dim)).astype(REAL)
    node_vectors = np.zeros((vocab_size - 1, dim), dtype=REAL)
    return ModelParams(input_vectors, node_vectors, dim)


def log_word_probability(params: ModelParams, coding: HuffmanCoding, hidden, w: int) -> float:
    """log p(w | hidden) under the hierarchical softmax, in float64."""
    path = coding.path(w)
    signs = 1.0 - 2.0 * coding.code(w).astype(np.float64)
    dots = params.node_vectors[path].astype(np.float64) @ np.asarray(hidden, dtype=np.float64)
    # log sigma(s * x) = -log(1 + exp(-s * x)), computed stably
    return float(-np.logaddexp(0.0, -signs * dots).sum())


def word_probability(params: ModelParams, coding: HuffmanCoding, hidden, w: int) -> float:
    """p(w | hidden); the per-node sibling probabilities sum to one, so the
    values over the whole vocabulary form a distribution."""
    return math.exp(log_word_probability(params, coding, hidden, w))


def loss(params: ModelParams, coding: HuffmanCoding, hidden, w: int) -> float:
    """-log p(w | hidden); equals L_w * log 2 when all node vectors are zero."""
    return -log_word_probability(params, coding, hidden, w)


def step_pair(
    params: ModelParams,
    coding: HuffmanCoding,
    source,
    target: int,
    lr: float,
    exact_sigmoid: bool = False,
    mean_backprop: bool = False,
):
    """One SGD step on -log p(target | h).

    ``source`` is either a single word index (skip-gram: h is that word's
    vector and receives the error) or a sequence of context indices (CBOW:
    h is their mean and each one receives the error).  Returns the error
    vector that was applied, or None when the context is empty.
    """
    syn0 = params.input_vectors
    syn1 = params.node_vectors
    if np.isscalar(source) or isinstance(source, (int, np.integer)):
        rows = np.asarray([source], dtype=np.int64)
    else:
        rows = np.asarray(source, dtype=np.int64)
        if rows.size == 0:
            return None

    path = coding.path(target)
    labels = 1.0 - coding.code(target)

    if exact_sigmoid:
        h = syn0[rows].astype(np.float64).mean(axis=0)
        dots = syn1[path].astype(np.float64) @ h
        g = (labels - sigmoid(dots)) * lr
        e = g @ syn1[path].astype(np.float64)
        syn1[path] += np.outer(g, h).astype(REAL)
    else:
        if len(rows) == 1:
            h = syn0[rows[0]]
        else:
            h = syn0[rows].mean(axis=0, dtype=REAL)
        dots = syn1[path] @ h
        live = np.abs(dots) <= MAX_EXP  # saturated nodes are skipped entirely
        path, labels, dots = path[live], labels[live], dots[live]
        g = ((labels - table_sigmoid(dots)) * lr).astype(REAL)
        e = g @ syn1[path]
        syn1[path] += np.outer(g, h)

    if mean_backprop:
        e = e / len(rows)
    e = e.astype(REAL)
    for row in rows:
        syn0[row] += e
    return e


def skipgram_step(
    params: ModelParams,
    coding: HuffmanCoding,
    center: int,
    context: int,
    lr: float,
    **kwargs,
):
    """Predict ``context`` from ``center``; error lands on the center vector."""
    return step_pair(params, coding, int(center), int(context), lr, **kwargs)


def cbow_step(
    params: ModelParams,
    coding: HuffmanCoding,
    context,
    target: int,
    lr: float,
    **kwargs,
):
    """Predict ``target`` from the averaged context; empty context is a no-op."""
    return step_pair(params, coding, context, int(target), lr, **kwargs)


@dataclass
class ComplexityEstimate:
    """Per-example parameter-access cost Q and, when E and T are known, the
    total training cost O = E * T * Q."""

    q: float
    o: float | None = None


def _require(kwargs: dict, arch: str, *names: str) -> list[float]:
    values = []
    for name in names:
        value = kwargs.get(name)
        if value is None:
            raise ValueError(f"{arch} estimate requires {name}")
        values.append(float(value))
    return values


def complexity_estimate(
    arch: str,
    n: int | None = None,
    dim: int | None = None,
    hidden: int | None = None,
    vocab: int | None = None,
    window: int | None = None,
    epochs: int | None = None,
    tokens: int | None = None,
    hierarchical: bool = False,
    code_length: float | None = None,
) -> ComplexityEstimate:
    """Per-example training cost of the four architectures.

    ``n`` is the context length, ``hidden`` the hidden layer width and
    ``window`` the maximum skip-gram distance C.  The log2(vocab) output
    term (used by cbow/skipgram always, and by nnlm/rnnlm when
    ``hierarchical``) can be replaced by a measured ``code_length``.
    """
    kwargs = {"n": n, "dim": dim, "hidden": hidden, "vocab": vocab, "window": window}
    arch = arch.lower()

    def out_units(v: float) -> float:
        return code_length if code_length is not None else math.log2(v)

    if arch == "nnlm":
        N, D, H, V = _require(kwargs, arch, "n", "dim", "hidden", "vocab")
        q = N * D + N * D * H + H * (out_units(V) if hierarchical else V)
    elif arch == "rnnlm":
        (H, V) = _require(kwargs, arch, "hidden", "vocab")
        q = H * H + H * (out_units(V) if hierarchical else V)
    elif arch == "cbow":
        N, D, V = _require(kwargs, arch, "n", "dim", "vocab")
        q = N * D + D * out_units(V)
    elif arch == "skipgram":
        C, D, V = _require(kwargs, arch, "window", "dim", "vocab")
        q = C * (D + D * out_units(V))
    else:
        raise ValueError(f"unknown architecture {arch!r}")

    o = None
    if epochs is not None and tokens is not None:
        o = float(epochs) * float(tokens) * q
    return ComplexityEstimate(q=q, o=o)
