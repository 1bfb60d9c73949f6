"""Deterministic stub backend.

Embeddings follow the "mock-v1" scheme from PROTOCOL.md exactly: SHA-256
counter blocks to big-endian uint32 words, fixed-point mapping to [-1, 1),
left-to-right normalization. No numpy, no float ambiguity; client-side
mocks that implement the same document reproduce these vectors bit for
bit.

Scores are the normalized length ratio against the reference (or, without
references, the source): 1.0 for equal lengths, 0.0 for an empty
hypothesis against non-empty text.
"""

import hashlib
import math
import struct

STUB_METRICS = ("bertscore", "bleurt20", "xcomet_xl", "luxembedder_qe")


def hash_vector(text: str, dims: int = 32, seed: int = 0) -> list[float]:
    if dims < 1:
        raise ValueError(f"dims must be positive, got {dims}")
    words: list[int] = []
    block = 0
    while len(words) < dims:
        digest = hashlib.sha256(f"{seed}:{block}:{text}".encode("utf-8")).digest()
        words.extend(struct.unpack(">8I", digest))
        block += 1
    raw = [(w / 4294967296.0) * 2.0 - 1.0 for w in words[:dims]]
    norm_sq = 0.0
    for value in raw:
        norm_sq += value * value
    norm = math.sqrt(norm_sq)
    if norm == 0.0:
        raise ValueError(f"degenerate zero-norm hash vector for text {text!r}")
    return [value / norm for value in raw]


def length_ratio(hyp: str, other: str) -> float:
    if not hyp and not other:
        return 1.0
    longer = max(len(hyp), len(other))
    return min(len(hyp), len(other)) / longer


class StubScorer:
    mode = "stub"

    def __init__(self, dims: int = 32, seed: int = 0):
        self.dims = dims
        self.seed = seed

    def info(self) -> dict:
        return {
            "mode": self.mode,
            "dims": self.dims,
            "model": f"stub-mock-v1(dims={self.dims}, seed={self.seed})",
            "metrics": list(STUB_METRICS),
        }

    def embed(self, texts: list[str]) -> list[list[float]]:
        return [hash_vector(t, self.dims, self.seed) for t in texts]

    def score(self, metric: str, srcs, hyps: list[str], refs) -> list[float]:
        if metric not in STUB_METRICS:
            raise ValueError(f"unsupported metric {metric!r}")
        against = refs if refs is not None else srcs
        if against is None:
            raise ValueError(f"metric {metric!r} needs refs or srcs")
        if len(against) != len(hyps):
            raise ValueError(f"{len(hyps)} hyps vs {len(against)} comparison texts")
        return [length_ratio(h, o) for h, o in zip(hyps, against)]
