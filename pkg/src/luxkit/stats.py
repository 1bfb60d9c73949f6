"""Paired bootstrap significance testing and system-level rank correlations.

Bootstrap determinism.  Replicate ``b`` draws its resample indices from
``numpy.random.default_rng([seed, b])``: the master seed plus the replicate
counter form the seed sequence.  Replicates are therefore independent,
reproducible bit-for-bit, and safe to compute in any order or in parallel.

Resampling recomputes each system's score on the resampled segments: the
mean for segment-level metrics, the corpus score from summed sufficient
statistics for BLEU and TER (pass ``BleuStats`` / ``TerStats`` from the
metrics module), and the macro mean for chrF2 (its corpus score already is
the mean of per-segment scores).

Correlations.  ``spearman_rho`` is the Pearson correlation of average-rank
vectors (ties get the mean of their rank positions); ``kendall_tau_b``
applies the tie correction on both sides.  p-values are two-sided
permutation tests: exact over all n! orderings for n <= 9, seeded
Monte-Carlo otherwise.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .corpus import (
    MetricId,
    METRIC_COLUMN_ORDER,
    ScoreRecord,
    SegmentScores,
    fixture_columns,
)
from .errors import CorpusFormatError

EXACT_PERMUTATION_MAX_N = 9
MONTE_CARLO_PERMUTATIONS = 100_000

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BootstrapConfig:
    replicates: int = 1000
    confidence: float = 0.95
    seed: int = 0

    def __post_init__(self):
        if self.replicates < 2:
            raise ValueError(f"need at least 2 bootstrap replicates, got {self.replicates}")
        if self.replicates < 100:
            # legal for quick experiments, too coarse for reported intervals
            logger.warning(
                "bootstrap with %d replicates is below the 100 needed for reporting",
                self.replicates,
            )
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(f"confidence must be in (0, 1), got {self.confidence}")
        if self.seed < 0:
            raise ValueError("bootstrap seed must be a non-negative integer")


@dataclass(frozen=True)
class SignificanceResult:
    delta: float
    ci_lo: float
    ci_hi: float
    significant: bool

    def __post_init__(self):
        if self.ci_lo > self.ci_hi:
            raise ValueError(f"inverted confidence interval [{self.ci_lo}, {self.ci_hi}]")


@dataclass(frozen=True)
class MeanScores:
    """Per-segment scores whose system score is their arithmetic mean."""

    values: np.ndarray

    @property
    def n_segments(self) -> int:
        return int(self.values.shape[0])

    def full_score(self) -> float:
        return float(self.values.mean())

    def scores_for(self, indices: np.ndarray) -> np.ndarray:
        return self.values[indices].mean(axis=1)


def _as_resampleable(scores) -> object:
    if isinstance(scores, SegmentScores):
        if scores.metric in (MetricId.BLEU, MetricId.TER):
            raise ValueError(
                f"{scores.metric.value} is corpus-level: pass its sufficient "
                "statistics (BleuStats / TerStats) instead of SegmentScores"
            )
        return MeanScores(np.asarray(scores.values, dtype=np.float64))
    if hasattr(scores, "scores_for") and hasattr(scores, "full_score"):
        return scores
    return MeanScores(np.asarray(scores, dtype=np.float64))


def bootstrap_indices(n_segments: int, cfg: BootstrapConfig) -> np.ndarray:
    """The (replicates, n_segments) resample index matrix for a config."""
    idx = np.empty((cfg.replicates, n_segments), dtype=np.intp)
    for b in range(cfg.replicates):
        rng = np.random.default_rng([cfg.seed, b])
        idx[b] = rng.integers(0, n_segments, size=n_segments)
    return idx


def paired_bootstrap(
    baseline_scores,
    candidate_scores,
    cfg: Optional[BootstrapConfig] = None,
) -> SignificanceResult:
    """Percentile-CI paired bootstrap for the candidate-minus-baseline delta.

    Both inputs must score the same segments in the same order.  The
    reported delta is the full-set difference; ``significant`` means the
    empirical confidence interval excludes zero.
    """
    cfg = cfg or BootstrapConfig()
    if isinstance(baseline_scores, SegmentScores) and isinstance(candidate_scores, SegmentScores):
        if baseline_scores.metric != candidate_scores.metric:
            raise ValueError(
                f"metric mismatch: {baseline_scores.metric.value} vs "
                f"{candidate_scores.metric.value}"
            )
    base = _as_resampleable(baseline_scores)
    cand = _as_resampleable(candidate_scores)
    if base.n_segments != cand.n_segments:
        raise ValueError(
            f"mismatched segment ids: baseline has {base.n_segments}, "
            f"candidate has {cand.n_segments}"
        )
    if base.n_segments == 0:
        raise ValueError("cannot bootstrap an empty score list")

    idx = bootstrap_indices(base.n_segments, cfg)
    deltas = np.asarray(cand.scores_for(idx)) - np.asarray(base.scores_for(idx))
    alpha = 1.0 - cfg.confidence
    ci_lo, ci_hi = np.quantile(deltas, [alpha / 2.0, 1.0 - alpha / 2.0], method="linear")
    delta = cand.full_score() - base.full_score()
    significant = not (ci_lo <= 0.0 <= ci_hi)
    return SignificanceResult(
        delta=float(delta), ci_lo=float(ci_lo), ci_hi=float(ci_hi), significant=bool(significant)
    )


# ---------------------------------------------------------------------------
# Rank correlations


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of their rank positions."""
    x = np.asarray(values, dtype=np.float64)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=np.float64)
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _validate_xy(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise ValueError(f"length mismatch: {xa.shape} vs {ya.shape}")
    if len(xa) < 3:
        raise ValueError(f"need at least 3 observations, got {len(xa)}")
    return xa, ya


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> float:
    xa, ya = _validate_xy(x, y)
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        raise ValueError("Spearman's rho is undefined for a constant vector")
    rx = average_ranks(xa)
    ry = average_ranks(ya)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    return float(np.dot(rx, ry) / math.sqrt(np.dot(rx, rx) * np.dot(ry, ry)))


def _pair_counts(xa: np.ndarray, ya: np.ndarray) -> tuple[int, int, int, int]:
    """(concordant, discordant, tied only in x, tied only in y)."""
    n = len(xa)
    concordant = discordant = tied_x = tied_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = xa[i] - xa[j]
            dy = ya[i] - ya[j]
            if dx == 0.0 and dy == 0.0:
                continue
            if dx == 0.0:
                tied_x += 1
            elif dy == 0.0:
                tied_y += 1
            elif (dx > 0.0) == (dy > 0.0):
                concordant += 1
            else:
                discordant += 1
    return concordant, discordant, tied_x, tied_y


def kendall_tau_b(x: Sequence[float], y: Sequence[float]) -> float:
    xa, ya = _validate_xy(x, y)
    concordant, discordant, tied_x, tied_y = _pair_counts(xa, ya)
    denom = (concordant + discordant + tied_y) * (concordant + discordant + tied_x)
    if denom == 0:
        raise ValueError("Kendall's tau-b is undefined when one side is entirely tied")
    return float((concordant - discordant) / math.sqrt(denom))


def _permutation_matrix(n: int, seed: int, n_mc: int) -> np.ndarray:
    if n <= EXACT_PERMUTATION_MAX_N:
        return np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    rng = np.random.default_rng(seed)
    return np.array([rng.permutation(n) for _ in range(n_mc)], dtype=np.intp)


def _rho_for_permutations(xa: np.ndarray, ya: np.ndarray, perms: np.ndarray) -> np.ndarray:
    rx = average_ranks(xa)
    ry = average_ranks(ya)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    norm = math.sqrt(float(np.dot(rx, rx)) * float(np.dot(ry, ry)))
    return (ry[perms] @ rx) / norm


def _tau_for_permutations(xa: np.ndarray, ya: np.ndarray, perms: np.ndarray) -> np.ndarray:
    n = len(xa)
    iu, ju = np.triu_indices(n, k=1)
    sign_x = np.sign(xa[iu] - xa[ju])
    sign_y_matrix = np.sign(ya[:, None] - ya[None, :])
    # Tie structure is permutation-invariant, so the tau-b denominator is
    # constant across permutations.
    n0 = n * (n - 1) // 2
    ties_x = int(np.sum(sign_x == 0))
    sy_full = np.sign(ya[iu] - ya[ju])
    ties_y = int(np.sum(sy_full == 0))
    denom = math.sqrt((n0 - ties_x) * (n0 - ties_y))
    sy_perm = sign_y_matrix[perms[:, iu], perms[:, ju]]
    return (sy_perm @ sign_x) / denom


def correlation_pvalue(
    x: Sequence[float],
    y: Sequence[float],
    stat: str,
    *,
    seed: int = 0,
    n_mc: int = MONTE_CARLO_PERMUTATIONS,
) -> float:
    """Two-sided permutation p-value for rho or tau_b.

    Exact over all n! orderings of y when n <= 9; otherwise a seeded
    Monte-Carlo sample of ``n_mc`` permutations.  p is the fraction of
    permutations whose |statistic| reaches |observed|.
    """
    xa, ya = _validate_xy(x, y)
    if stat == "rho":
        observed = spearman_rho(xa, ya)
        perms = _permutation_matrix(len(xa), seed, n_mc)
        values = _rho_for_permutations(xa, ya, perms)
    elif stat == "tau_b":
        observed = kendall_tau_b(xa, ya)
        perms = _permutation_matrix(len(xa), seed, n_mc)
        values = _tau_for_permutations(xa, ya, perms)
    else:
        raise ValueError(f"unknown statistic {stat!r}; use 'rho' or 'tau_b'")
    hits = int(np.sum(np.abs(values) >= abs(observed) - 1e-12))
    return hits / len(values)


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    tau: float
    p_rho: float
    p_tau: float

    def __post_init__(self):
        for name in ("p_rho", "p_tau"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} outside [0, 1]: {p}")


def system_correlation_matrix(
    records: Sequence[ScoreRecord],
    lp,
    qe_metric: MetricId = MetricId.LUXEMBEDDER_QE,
) -> dict[MetricId, CorrelationResult]:
    """Correlate the QE metric's system scores against every other metric.

    Lower-better metrics are negated first so that every column is oriented
    "higher means better quality"; without that step an anti-oriented metric
    would (misleadingly) show negative agreement.
    """
    systems, columns = fixture_columns(records, lp)
    if qe_metric not in columns:
        raise CorpusFormatError(f"missing column for metric {qe_metric.value}")
    qe_column = columns[qe_metric]
    results: dict[MetricId, CorrelationResult] = {}
    for metric in METRIC_COLUMN_ORDER:
        if metric is qe_metric:
            continue
        if metric not in columns:
            raise CorpusFormatError(f"missing column for metric {metric.value}")
        column = columns[metric]
        oriented = [-v for v in column] if metric.lower_better else list(column)
        results[metric] = CorrelationResult(
            rho=spearman_rho(qe_column, oriented),
            tau=kendall_tau_b(qe_column, oriented),
            p_rho=correlation_pvalue(qe_column, oriented, "rho"),
            p_tau=correlation_pvalue(qe_column, oriented, "tau_b"),
        )
    return results
