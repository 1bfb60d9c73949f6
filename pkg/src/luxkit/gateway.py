"""Uniform access to external neural metrics and the embedding-based QE score.

The toolkit never implements BERTScore, BLEURT-20, or xCOMET model math;
scores arrive either from a precomputed TSV (the default in CI, no model
downloads) or live from a scorer process speaking the NDJSON protocol.
Each metric declares which segment fields it needs, enforced before any
external call is made.

The QE score embeds source and hypothesis, clamps their cosine to [0, 1],
and maps it affinely onto [80, 100] so it scales like the other metrics.
The map is order-preserving, so system rankings by QE equal rankings by
mean clamped cosine.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .corpus import LanguagePair, MetricId, SegmentScores
from .embedding import embed
from .errors import LuxkitError, ProtocolError
from .wire import NdjsonClient

SOURCE = "source"
HYPOTHESIS = "hypothesis"
REFERENCE = "reference"

METRIC_NEEDS: dict[MetricId, frozenset[str]] = {
    MetricId.BERTSCORE: frozenset({HYPOTHESIS, REFERENCE}),
    MetricId.BLEURT20: frozenset({HYPOTHESIS, REFERENCE}),
    MetricId.XCOMET_XL: frozenset({SOURCE, HYPOTHESIS, REFERENCE}),
    MetricId.LUXEMBEDDER_QE: frozenset({SOURCE, HYPOTHESIS}),
}


@dataclass(frozen=True)
class EvalSegment:
    """One scoring unit: id plus whichever of src/hyp/ref exist."""

    id: str
    hypothesis: str
    source: Optional[str] = None
    reference: Optional[str] = None

    def get(self, which: str) -> Optional[str]:
        return {SOURCE: self.source, HYPOTHESIS: self.hypothesis, REFERENCE: self.reference}[which]


def check_needs(segments: Sequence[EvalSegment], metric: MetricId) -> None:
    """Fail fast when a segment lacks a field the metric requires."""
    needs = METRIC_NEEDS.get(metric)
    if needs is None:
        raise LuxkitError(f"{metric.value} is not an external metric")
    for segment in segments:
        for which in needs:
            if segment.get(which) is None:
                raise LuxkitError(
                    f"metric {metric.value} needs a {which}, segment {segment.id!r} has none"
                )


class PrecomputedScoreAdapter:
    """Scores read from a TSV of ``segment_id<TAB>score`` rows."""

    kind = "precomputed_file"

    def __init__(self, path: Union[str, Path], metric: MetricId):
        self.metric = metric
        self.path = Path(path)
        if not self.path.exists():
            raise LuxkitError(f"score file not found: {self.path}")
        self._scores: dict[str, float] = {}
        with self.path.open("r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) != 2:
                    raise LuxkitError(f"{self.path}:{lineno}: expected 'segment_id<TAB>score'")
                try:
                    self._scores[cols[0]] = float(cols[1])
                except ValueError as exc:
                    raise LuxkitError(f"{self.path}:{lineno}: bad score {cols[1]!r}") from exc

    def score_batch(self, segments: Sequence[EvalSegment]) -> list[float]:
        out = []
        for segment in segments:
            if segment.id not in self._scores:
                raise LuxkitError(
                    f"no precomputed {self.metric.value} score for segment {segment.id!r}"
                )
            out.append(self._scores[segment.id])
        return out

    def describe(self) -> str:
        return f"precomputed_file:{self.path}"


class SubprocessScorerAdapter:
    """Scores fetched from an NDJSON scorer subprocess (single-flight)."""

    kind = "subprocess_protocol"

    def __init__(self, command: Sequence[str], metric: MetricId):
        self.metric = metric
        self._client = NdjsonClient(command)
        info = self._client.request("info").get("info", {})
        self._model = str(info.get("model", "unknown"))
        supported = info.get("metrics")
        if supported is not None and metric.value not in supported:
            raise LuxkitError(f"scorer does not support metric {metric.value}")

    def score_batch(self, segments: Sequence[EvalSegment]) -> list[float]:
        needs = METRIC_NEEDS[self.metric]
        payload = {
            "metric": self.metric.value,
            "hyps": [s.hypothesis for s in segments],
            "srcs": [s.source for s in segments] if SOURCE in needs else None,
            "refs": [s.reference for s in segments] if REFERENCE in needs else None,
        }
        response = self._client.request("score", **payload)
        scores = response.get("scores")
        if scores is None or len(scores) != len(segments):
            raise ProtocolError(
                f"score returned {0 if scores is None else len(scores)} values "
                f"for {len(segments)} segments"
            )
        return [float(s) for s in scores]

    def describe(self) -> str:
        return f"subprocess:{self._model}"

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "SubprocessScorerAdapter":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def external_score(
    segments: Sequence[EvalSegment],
    adapter,
    *,
    system: str = "unknown",
    lp: Optional[Union[LanguagePair, str]] = None,
) -> SegmentScores:
    """Score segments with an external adapter, preserving id order."""
    if isinstance(lp, str):
        lp = LanguagePair.parse(lp)
    metric = adapter.metric
    check_needs(segments, metric)
    values = adapter.score_batch(segments)
    if len(values) != len(segments):
        raise ProtocolError(
            f"adapter returned {len(values)} scores for {len(segments)} segments"
        )
    return SegmentScores(
        system=system,
        metric=metric,
        lp=lp,
        values=tuple(float(v) for v in values),
        provenance=adapter.describe(),
    )


@dataclass(frozen=True)
class QeNormalization:
    """Affine map from clamped cosine similarity onto [lo, hi].

    Negative cosines clamp to zero rather than mapping below ``lo``, which
    keeps the published score range literal.
    """

    lo: float = 80.0
    hi: float = 100.0
    clamp_lo: float = 0.0
    clamp_hi: float = 1.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")

    def apply(self, cosine_value: float) -> float:
        c = max(self.clamp_lo, min(self.clamp_hi, cosine_value))
        span = self.clamp_hi - self.clamp_lo
        return self.lo + (self.hi - self.lo) * (c - self.clamp_lo) / span


def qe_luxembedder(
    sources: Sequence[str],
    hypotheses: Sequence[str],
    provider,
    norm: QeNormalization = QeNormalization(),
    *,
    system: str = "unknown",
    lp: Optional[Union[LanguagePair, str]] = None,
) -> SegmentScores:
    """Reference-free QE: normalized cosine between source and hypothesis."""
    if len(sources) != len(hypotheses):
        raise ValueError(f"{len(sources)} sources vs {len(hypotheses)} hypotheses")
    if not sources:
        raise ValueError("empty corpus")
    if isinstance(lp, str):
        lp = LanguagePair.parse(lp)
    src_vecs = np.vstack(embed(list(sources), provider))
    hyp_vecs = np.vstack(embed(list(hypotheses), provider))
    ns = np.linalg.norm(src_vecs, axis=1)
    nh = np.linalg.norm(hyp_vecs, axis=1)
    if np.any(ns == 0.0) or np.any(nh == 0.0):
        raise ValueError("cosine is undefined for zero-norm vectors")
    cosines = np.clip(np.sum(src_vecs * hyp_vecs, axis=1) / (ns * nh), -1.0, 1.0)
    values = tuple(norm.apply(float(c)) for c in cosines)
    return SegmentScores(
        system=system,
        metric=MetricId.LUXEMBEDDER_QE,
        lp=lp,
        values=values,
        provenance=getattr(provider, "describe", lambda: "embedding provider")(),
    )


def system_score(scores: SegmentScores) -> float:
    """The single number summarizing one system on one metric.

    The mean of segment scores, except for corpus-level metrics (BLEU,
    TER) whose recomputed corpus score is carried on the object.
    """
    if scores.corpus_score is not None:
        return float(scores.corpus_score)
    if not scores.values:
        raise ValueError("cannot summarize an empty score list")
    return float(np.mean(scores.values))
