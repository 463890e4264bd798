"""Embedding rows for added tokens: four initialization strategies plus binary IO.

New rows are appended below the base matrix; base rows are never touched.
Strategies follow the usual conventions: gaussian draws N(0, std) with
std 0.02 by default, xavier_uniform draws U(-a, a) with
a = sqrt(6 / (fan_in + fan_out)), avg_all uses the mean base row, and
avg_subwords averages the base rows of each added token's decomposition.
"""

import json
import struct
from dataclasses import dataclass

import numpy as np

from .errors import EmbeddingError

MAGIC = b"LEMB"
FORMAT_VERSION = 1

STRATEGIES = ("gaussian", "xavier_uniform", "avg_all", "avg_subwords")


@dataclass
class InitStrategy:
    kind: str
    gaussian_std: float = 0.02
    seed: int = 0
    # fan assignment for xavier_uniform; None means (extended vocab, dim)
    fan_in: int | None = None
    fan_out: int | None = None

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise EmbeddingError(f"unknown init strategy {self.kind!r}")
        if self.gaussian_std <= 0:
            raise EmbeddingError(f"gaussian_std must be positive, got {self.gaussian_std}")


@dataclass
class EmbeddingMatrix:
    """A rows x dim float32 table; row r is the embedding of token id r."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float32)
        if arr.ndim != 2:
            raise EmbeddingError(f"embedding data must be 2-D, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise EmbeddingError("embedding matrix contains non-finite values")
        self.data = arr

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def dim(self):
        return self.data.shape[1]


def xavier_bound(fan_in, fan_out):
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def extend_embeddings(base, ext, strategy):
    """Append initialized rows for every added token of an extended tokenizer.

    The returned matrix has base.rows + len(ext.added) rows; rows below
    base.rows are value-identical to base.
    """
    if base.rows != ext.base.vocab_size:
        raise EmbeddingError(
            f"base matrix has {base.rows} rows but base tokenizer has "
            f"{ext.base.vocab_size} tokens"
        )
    n_new = len(ext.added)
    dim = base.dim
    old = base.data

    if strategy.kind == "gaussian":
        rng = np.random.Generator(np.random.PCG64(strategy.seed))
        new = rng.normal(0.0, strategy.gaussian_std, size=(n_new, dim))
    elif strategy.kind == "xavier_uniform":
        fan_in = strategy.fan_in if strategy.fan_in is not None else ext.vocab_size
        fan_out = strategy.fan_out if strategy.fan_out is not None else dim
        bound = xavier_bound(fan_in, fan_out)
        rng = np.random.Generator(np.random.PCG64(strategy.seed))
        new = rng.uniform(-bound, bound, size=(n_new, dim))
    elif strategy.kind == "avg_all":
        mean = old.astype(np.float64).mean(axis=0)
        new = np.tile(mean, (n_new, 1))
    else:  # avg_subwords
        new = np.empty((n_new, dim), dtype=np.float64)
        for i, tok in enumerate(ext.added):
            if not tok.subword_ids:
                raise EmbeddingError(f"added token id {tok.id} has no subword ids")
            new[i] = old[list(tok.subword_ids)].astype(np.float64).mean(axis=0)

    out = np.empty((base.rows + n_new, dim), dtype=np.float32)
    out[: base.rows] = old
    out[base.rows:] = new.astype(np.float32)
    return EmbeddingMatrix(out)


def save_embeddings(m, path, tokenizer_sha256=None):
    """Write the binary embedding file and its JSON sidecar."""
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQQ", FORMAT_VERSION, m.rows, m.dim))
        fh.write(np.ascontiguousarray(m.data, dtype="<f4").tobytes())
    sidecar = {"rows": m.rows, "dim": m.dim, "tokenizer_sha256": tokenizer_sha256 or ""}
    with open(str(path) + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_embeddings(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise EmbeddingError(f"{path}: bad magic {blob[:4]!r}, expected {MAGIC!r}")
    if len(blob) < 24:
        raise EmbeddingError(f"{path}: truncated header")
    version, rows, dim = struct.unpack("<IQQ", blob[4:24])
    if version != FORMAT_VERSION:
        raise EmbeddingError(f"{path}: unsupported embedding format version {version}")
    expected = 24 + rows * dim * 4
    if len(blob) != expected:
        raise EmbeddingError(
            f"{path}: payload holds {len(blob)} bytes, header implies {expected}"
        )
    data = np.frombuffer(blob[24:], dtype="<f4").reshape(rows, dim).copy()
    return EmbeddingMatrix(data)
