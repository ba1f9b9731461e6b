"""Word-vector substrate: windowed co-occurrence counting and GloVe-style
weighted least-squares training, plus pretrained-vector loading and
similarity queries.

Training minimizes  J = sum_ij f(X_ij) (w_i . w~_j + b_i + b~_j - ln X_ij)^2
over the stored (symmetric) co-occurrence cells, with per-cell adaptive
gradient updates. The sequential mode is bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .errors import (
    DimensionMismatch,
    DivergenceDetected,
    EmptyInput,
    InconsistentDimensions,
    MalformedRow,
    NonPositiveCell,
    ZeroVector,
)

logger = logging.getLogger(__name__)


class Weighting(str, Enum):
    UNIFORM = "uniform"
    INVERSE_DISTANCE = "inverse-distance"


@dataclass
class CooccurrenceMatrix:
    """Sparse symmetric co-occurrence counts over an ordered vocabulary."""

    vocab: list[str]
    cells: dict[tuple[int, int], float]
    window: int
    weighting: Weighting

    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.vocab)}

    def to_lines(self) -> list[str]:
        """Triplet dump, one 'i j x' per stored cell, sorted."""
        return [f"{i} {j} {x:.6f}" for (i, j), x in sorted(self.cells.items())]


def build_cooccurrence(token_streams: Iterable[list[str]], window: int = 5,
                       weighting: Weighting = Weighting.INVERSE_DISTANCE) -> CooccurrenceMatrix:
    """Count co-occurrences within ``window`` positions; never across streams.

    Each unordered position pair (p, q) with q - p <= window adds
    1 (uniform) or 1/(q - p) (inverse-distance) to both X_ij and X_ji.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    streams = [list(s) for s in token_streams]
    if not streams or all(not s for s in streams):
        raise EmptyInput("no tokens to count")

    vocab = sorted({tok for stream in streams for tok in stream})
    index = {w: i for i, w in enumerate(vocab)}
    cells: dict[tuple[int, int], float] = {}
    for stream in streams:
        for p in range(len(stream)):
            for q in range(p + 1, min(p + window + 1, len(stream))):
                w = 1.0 if weighting is Weighting.UNIFORM else 1.0 / (q - p)
                i, j = index[stream[p]], index[stream[q]]
                cells[(i, j)] = cells.get((i, j), 0.0) + w
                cells[(j, i)] = cells.get((j, i), 0.0) + w
    return CooccurrenceMatrix(vocab=vocab, cells=cells, window=window, weighting=weighting)


@dataclass
class GloveConfig:
    """Hyperparameters; defaults follow the usual settings for this method."""

    dim: int = 50
    x_max: float = 100.0
    alpha: float = 0.75
    learning_rate: float = 0.05
    epochs: int = 50
    seed: int = 0

    def validate(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError("alpha must be in (0, 1]")
        if self.x_max <= 0:
            raise ValueError("x_max must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


@dataclass
class GloveParams:
    """Main/context vectors and biases for every vocabulary entry."""

    W: np.ndarray
    W_ctx: np.ndarray
    b: np.ndarray
    b_ctx: np.ndarray

    @classmethod
    def init(cls, vocab_size: int, config: GloveConfig) -> "GloveParams":
        rng = np.random.default_rng(config.seed)
        scale = 0.5 / config.dim
        return cls(
            W=rng.uniform(-scale, scale, (vocab_size, config.dim)),
            W_ctx=rng.uniform(-scale, scale, (vocab_size, config.dim)),
            b=rng.uniform(-scale, scale, vocab_size),
            b_ctx=rng.uniform(-scale, scale, vocab_size),
        )


class EmbeddingTable:
    """Immutable word -> vector map with a fixed dimensionality."""

    def __init__(self, vectors: dict[str, np.ndarray], normalized: bool = False):
        if not vectors:
            raise ValueError("embedding table must be non-empty")
        dims = {len(v) for v in vectors.values()}
        if len(dims) != 1:
            raise InconsistentDimensions(f"mixed dimensionalities: {sorted(dims)}")
        self._vectors = {w: np.asarray(v, dtype=float) for w, v in vectors.items()}
        self.dim = dims.pop()
        self.normalized = normalized

    def __contains__(self, word: str) -> bool:
        return word in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def words(self) -> list[str]:
        return sorted(self._vectors)

    def vector(self, word: str) -> np.ndarray:
        return self._vectors[word]

    def save(self, path: str | Path) -> None:
        """Text format: one 'word v1 v2 ... vd' row per word, sorted."""
        lines = [
            word + " " + " ".join(f"{x:.6f}" for x in self._vectors[word])
            for word in sorted(self._vectors)
        ]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def glove_weight(x: float, x_max: float = 100.0, alpha: float = 0.75) -> float:
    """(x / x_max)^alpha, capped at 1 for x >= x_max."""
    if x < 0:
        raise ValueError("x must be >= 0")
    if x >= x_max:
        return 1.0
    return (x / x_max) ** alpha


def glove_cost_and_grad(params: GloveParams, matrix: CooccurrenceMatrix,
                        x_max: float = 100.0, alpha: float = 0.75):
    """Exact cost and analytic gradients over all stored cells."""
    gW = np.zeros_like(params.W)
    gW_ctx = np.zeros_like(params.W_ctx)
    gb = np.zeros_like(params.b)
    gb_ctx = np.zeros_like(params.b_ctx)
    cost = 0.0
    for (i, j), x in matrix.cells.items():
        if x <= 0:
            raise NonPositiveCell(f"cell ({i}, {j}) = {x}")
        f = glove_weight(x, x_max, alpha)
        r = params.W[i] @ params.W_ctx[j] + params.b[i] + params.b_ctx[j] - np.log(x)
        cost += f * r * r
        g = 2.0 * f * r
        gW[i] += g * params.W_ctx[j]
        gW_ctx[j] += g * params.W[i]
        gb[i] += g
        gb_ctx[j] += g
    grads = GloveParams(W=gW, W_ctx=gW_ctx, b=gb, b_ctx=gb_ctx)
    return cost, grads


def train_glove(matrix: CooccurrenceMatrix, config: GloveConfig | None = None,
                on_epoch: Callable[[int, float], None] | None = None) -> EmbeddingTable:
    """Sequential per-cell adagrad training; final vector is W + W_ctx.

    Same seed and input give bit-identical output. ``on_epoch`` receives
    (epoch index, epoch cost), where the cost accumulates each cell's
    pre-update residual as the epoch sweeps the cells.
    """
    config = config or GloveConfig()
    config.validate()
    if not matrix.cells:
        raise EmptyInput("co-occurrence matrix has no cells")
    for (i, j), x in matrix.cells.items():
        if x <= 0:
            raise NonPositiveCell(f"cell ({i}, {j}) = {x}")

    n = len(matrix.vocab)
    params = GloveParams.init(n, config)
    rng = np.random.default_rng(config.seed + 1)
    cell_list = sorted(matrix.cells.items())
    log_x = {ij: np.log(x) for ij, x in cell_list}
    f_x = {ij: glove_weight(x, config.x_max, config.alpha) for ij, x in cell_list}

    # adagrad accumulators start at 1.0 so early steps are bounded by lr
    hW = np.ones_like(params.W)
    hW_ctx = np.ones_like(params.W_ctx)
    hb = np.ones_like(params.b)
    hb_ctx = np.ones_like(params.b_ctx)
    lr = config.learning_rate

    for epoch in range(config.epochs):
        order = rng.permutation(len(cell_list))
        cost = 0.0
        for idx in order:
            (i, j), _x = cell_list[idx]
            f = f_x[(i, j)]
            r = params.W[i] @ params.W_ctx[j] + params.b[i] + params.b_ctx[j] - log_x[(i, j)]
            cost += f * r * r
            g = 2.0 * f * r
            gw = g * params.W_ctx[j]
            gc = g * params.W[i]
            params.W[i] -= lr * gw / np.sqrt(hW[i])
            params.W_ctx[j] -= lr * gc / np.sqrt(hW_ctx[j])
            params.b[i] -= lr * g / np.sqrt(hb[i])
            params.b_ctx[j] -= lr * g / np.sqrt(hb_ctx[j])
            hW[i] += gw * gw
            hW_ctx[j] += gc * gc
            hb[i] += g * g
            hb_ctx[j] += g * g
        if not np.isfinite(cost):
            raise DivergenceDetected(f"cost became non-finite at epoch {epoch}")
        if on_epoch is not None:
            on_epoch(epoch, cost)

    combined = params.W + params.W_ctx
    return EmbeddingTable({w: combined[i].copy() for i, w in enumerate(matrix.vocab)})


def load_vectors(path: str | Path) -> EmbeddingTable:
    """Load the 'word v1 ... vd' text format; duplicate words: last one wins."""
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) < 2:
                raise MalformedRow(f"{path}:{lineno}: need a word and at least one value")
            word = parts[0]
            try:
                vec = np.array([float(p) for p in parts[1:]], dtype=float)
            except ValueError:
                raise MalformedRow(f"{path}:{lineno}: non-numeric vector component")
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise InconsistentDimensions(f"{path}:{lineno}: got dim {len(vec)}, expected {dim}")
            if word in vectors:
                logger.warning("duplicate word %r at %s:%d; keeping the later row", word, path, lineno)
            vectors[word] = vec
    if not vectors:
        raise MalformedRow(f"{path}: no vector rows")
    return EmbeddingTable(vectors)


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """u.v / (|u||v|); undefined for zero vectors or mismatched dimensions."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise DimensionMismatch(f"{u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine similarity undefined for a zero vector")
    return float(np.dot(u, v) / (nu * nv))
