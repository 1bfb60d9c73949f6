"""Real-mode backend: wraps an actual sentence-embedding model.

Embeddings and the embedding-based QE score (raw source-hypothesis cosine;
the client applies its own normalization) come from a sentence-transformers
checkpoint given by path or model id. Reference-based neural metrics need
their own model libraries; installations that lack them get an ok=false
response naming the metric rather than a crash.
"""

import math


class RealScorer:
    mode = "real"

    def __init__(self, model_path: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise RuntimeError(
                "real mode needs the sentence-transformers package "
                "(pip install 'scorer-bridge[real]')"
            ) from exc
        self._model = SentenceTransformer(model_path)
        self._model_path = model_path
        probe = self._model.encode(["probe"], convert_to_numpy=True)
        self.dims = int(probe.shape[1])

    def info(self) -> dict:
        return {
            "mode": self.mode,
            "dims": self.dims,
            "model": self._model_path,
            "metrics": ["luxembedder_qe"],
        }

    def embed(self, texts: list[str]) -> list[list[float]]:
        matrix = self._model.encode(texts, convert_to_numpy=True)
        return [[float(x) for x in row] for row in matrix]

    def score(self, metric: str, srcs, hyps: list[str], refs) -> list[float]:
        if metric != "luxembedder_qe":
            raise ValueError(
                f"metric {metric!r} needs its own model wrapper, which this "
                "installation does not provide"
            )
        if srcs is None:
            raise ValueError("luxembedder_qe needs srcs")
        src_vecs = self.embed(list(srcs))
        hyp_vecs = self.embed(list(hyps))
        return [_cosine(s, h) for s, h in zip(src_vecs, hyp_vecs)]


def _cosine(u: list[float], v: list[float]) -> float:
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine is undefined for zero-norm vectors")
    return max(-1.0, min(1.0, dot / (nu * nv)))
