"""Embedding providers and cosine similarity.

Three provider kinds share one contract: the same text always maps to the
same vector within a provider instance.

* ``MockHashProvider`` expands a SHA-256 counter hash of the text into a
  fixed-dimension unit vector.  It is the test-suite workhorse: fully
  deterministic across platforms and processes, no model required.  The
  exact scheme is frozen in PROTOCOL.md ("mock-v1") so that out-of-process
  stub scorers reproduce it bit for bit.
* ``PrecomputedFileProvider`` serves vectors from a JSONL file of
  ``{"text": ..., "vector": [...]}`` records.
* ``SubprocessProvider`` asks an external scorer over the NDJSON protocol;
  requests are single-flight per instance.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ProviderError, ProtocolError
from .wire import NdjsonClient

MOCK_DEFAULT_DIMS = 32
MOCK_DEFAULT_SEED = 0


def hash_vector(text: str, dims: int = MOCK_DEFAULT_DIMS, seed: int = MOCK_DEFAULT_SEED) -> np.ndarray:
    """Deterministic unit vector for a text ("mock-v1" scheme).

    Big-endian uint32 words are drawn from SHA-256("{seed}:{block}:{text}")
    blocks, mapped to [-1, 1) by ``u / 2**32 * 2 - 1`` (exact in float64),
    then normalized with a left-to-right sum of squares.  Every step is
    bit-reproducible in any language with IEEE-754 doubles and SHA-256.
    """
    if dims < 1:
        raise ValueError(f"dims must be positive, got {dims}")
    words: list[int] = []
    block = 0
    while len(words) < dims:
        digest = hashlib.sha256(f"{seed}:{block}:{text}".encode("utf-8")).digest()
        words.extend(struct.unpack(">8I", digest))
        block += 1
    raw = np.empty(dims, dtype=np.float64)
    for i in range(dims):
        raw[i] = (words[i] / 4294967296.0) * 2.0 - 1.0
    norm_sq = 0.0
    for i in range(dims):
        norm_sq += raw[i] * raw[i]
    norm = np.sqrt(norm_sq)
    if norm == 0.0:
        raise ProviderError(f"degenerate zero-norm hash vector for text {text!r}")
    return raw / norm


class MockHashProvider:
    """Seeded hash-vector provider; safe for concurrent use (pure function)."""

    kind = "mock_deterministic"

    def __init__(self, dims: int = MOCK_DEFAULT_DIMS, seed: int = MOCK_DEFAULT_SEED):
        self.dims = dims
        self.seed = seed

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        out = np.empty((len(texts), self.dims), dtype=np.float64)
        for i, text in enumerate(texts):
            out[i] = hash_vector(text, self.dims, self.seed)
        return out

    def describe(self) -> str:
        return f"mock-v1(dims={self.dims}, seed={self.seed})"


class PrecomputedFileProvider:
    """Vectors looked up from a JSONL file keyed by exact text."""

    kind = "precomputed_file"

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self._vectors: dict[str, np.ndarray] = {}
        if not self.path.exists():
            raise ProviderError(f"embedding file not found: {self.path}")
        dims: Optional[int] = None
        with self.path.open("r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    vec = np.asarray(rec["vector"], dtype=np.float64)
                    text = rec["text"]
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise ProviderError(f"{self.path}:{lineno}: bad embedding record: {exc}") from exc
                if vec.ndim != 1 or not np.all(np.isfinite(vec)):
                    raise ProviderError(f"{self.path}:{lineno}: vector must be finite and 1-D")
                if dims is None:
                    dims = int(vec.shape[0])
                elif vec.shape[0] != dims:
                    raise ProviderError(
                        f"{self.path}:{lineno}: inconsistent dims {vec.shape[0]} != {dims}"
                    )
                self._vectors[text] = vec
        if dims is None:
            raise ProviderError(f"embedding file {self.path} is empty")
        self.dims = dims

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        out = np.empty((len(texts), self.dims), dtype=np.float64)
        for i, text in enumerate(texts):
            vec = self._vectors.get(text)
            if vec is None:
                raise ProviderError(f"no precomputed embedding for text {text!r}")
            out[i] = vec
        return out

    def describe(self) -> str:
        return f"precomputed({self.path})"


class SubprocessProvider:
    """Embeddings served by an external scorer over the NDJSON protocol.

    Single-flight: one request at a time per instance, the client lock
    queues concurrent callers.
    """

    kind = "subprocess_protocol"

    def __init__(self, command: Sequence[str]):
        self._client = NdjsonClient(command)
        info = self._client.request("info").get("info", {})
        self.dims = int(info.get("dims", 0))
        self._model = str(info.get("model", "unknown"))
        if self.dims < 1:
            raise ProviderError(f"scorer {command!r} reported no embedding dims")

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        response = self._client.request("embed", texts=list(texts))
        vectors = response.get("vectors")
        if vectors is None or len(vectors) != len(texts):
            raise ProtocolError(
                f"embed returned {0 if vectors is None else len(vectors)} vectors "
                f"for {len(texts)} texts"
            )
        arr = np.asarray(vectors, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != self.dims:
            raise ProtocolError(f"embed returned shape {arr.shape}, expected (n, {self.dims})")
        return arr

    def describe(self) -> str:
        return f"subprocess({self._model}, dims={self.dims})"

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "SubprocessProvider":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def embed(texts: Sequence[str], provider) -> list[np.ndarray]:
    """One vector per text, in input order.

    Provider failures are re-raised as ProviderError naming the provider
    kind and the first failing index.
    """
    try:
        matrix = provider.embed_batch(list(texts))
    except ProviderError:
        raise
    except Exception as exc:  # noqa: BLE001 - wrap backend-specific failures
        raise ProviderError(f"{getattr(provider, 'kind', '?')} provider failed at index 0: {exc}") from exc
    if matrix.shape[0] != len(texts):
        raise ProviderError(
            f"{getattr(provider, 'kind', '?')} provider returned {matrix.shape[0]} vectors "
            f"for {len(texts)} texts (first failing index {matrix.shape[0]})"
        )
    if not np.all(np.isfinite(matrix)):
        bad = int(np.argwhere(~np.isfinite(matrix))[0][0])
        raise ProviderError(
            f"{getattr(provider, 'kind', '?')} provider returned non-finite vector at index {bad}"
        )
    return [matrix[i] for i in range(matrix.shape[0])]


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity, clamped to [-1, 1] against rounding drift."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine is undefined for zero-norm vectors")
    value = float(np.dot(u, v) / (nu * nv))
    return max(-1.0, min(1.0, value))


def cosine_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise cosine similarities between the rows of two matrices."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = np.linalg.norm(a, axis=1, keepdims=True)
    nb = np.linalg.norm(b, axis=1, keepdims=True)
    if np.any(na == 0.0) or np.any(nb == 0.0):
        raise ValueError("cosine is undefined for zero-norm vectors")
    sims = (a / na) @ (b / nb).T
    return np.clip(sims, -1.0, 1.0)
