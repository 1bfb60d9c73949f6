"""Native corpus-level implementations of BLEU, chrF2, and TER.

Tokenizer.  All word-level metrics share one built-in tokenizer so scores
are bit-reproducible.  Its rules, applied in order:

1. ``&quot; &amp; &lt; &gt;`` are unescaped; newlines become spaces.
2. The string is padded with one space on each side.
3. Any character in the ASCII ranges ``{-~``, ``[-```, `` -&``, ``(-+``,
   ``:-@``, and ``/`` is split off with surrounding spaces.
4. ``.`` and ``,`` are split off unless both neighbours are digits
   (decimal and thousands separators stay attached).
5. ``-`` is split off when preceded by a digit.
6. Tokens are the remaining whitespace-separated runs.

Non-ASCII letters pass through untouched, so accented and non-Latin text
tokenizes on whitespace and ASCII punctuation only.

BLEU is the geometric mean of modified n-gram precisions for n = 1..4 times
the brevity penalty, on a 0-100 scale.  Orders with no n-grams at all (a
corpus shorter than n tokens) are excluded from the mean.  A zero match
count at order 1 gives score 0; zero match counts at higher orders use
exponential smoothing (the divide-by-two rule: the k-th zero order scores
``1 / (2^k * total)``), which a flag disables.

chrF2 is the macro-average over segments of the character n-gram F-score
with beta = 2 and orders 1..6, whitespace removed, no word n-grams.

TER is total edits divided by total reference tokens, times 100.  Edits are
insertions, deletions, substitutions, and block shifts searched greedily
best-first: a contiguous hypothesis block may move iff it exactly matches a
reference subsequence, the move lands the block at that reference position,
and the move strictly lowers the remaining edit distance.  Each round
applies the legal shift that minimizes the resulting edit distance; ties
prefer the shortest block, then the leftmost hypothesis position, then the
leftmost reference position.  The tie order is part of the metric's
definition (different choices can change the final count).  Block size and
shift distance are capped; searching over whole shift sequences instead of
greedily is exponential and deliberately out of scope.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .corpus import MetricId

BLEU_MAX_ORDER = 4
CHRF_MAX_ORDER = 6
CHRF_BETA = 2.0
TER_MAX_BLOCK_SIZE = 10
TER_MAX_SHIFT_DISTANCE = 50


@dataclass(frozen=True)
class CorpusScore:
    """A corpus-level metric value plus the segment count it covers."""

    metric: MetricId
    value: float
    n_segments: int


# ---------------------------------------------------------------------------
# Tokenization

_PUNCT_SPLIT = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
_PERIOD_BEFORE = re.compile(r"([^0-9])([\.,])")
_PERIOD_AFTER = re.compile(r"([\.,])([^0-9])")
_DIGIT_DASH = re.compile(r"([0-9])(-)")


def tokenize_13a(line: str) -> list[str]:
    norm = line
    norm = norm.replace("&quot;", '"').replace("&amp;", "&")
    norm = norm.replace("&lt;", "<").replace("&gt;", ">")
    norm = norm.replace("-\n", "").replace("\n", " ")
    norm = f" {norm} "
    norm = _PUNCT_SPLIT.sub(r" \1 ", norm)
    norm = _PERIOD_BEFORE.sub(r"\1 \2 ", norm)
    norm = _PERIOD_AFTER.sub(r" \1 \2", norm)
    norm = _DIGIT_DASH.sub(r"\1 \2 ", norm)
    return norm.split()


Tokenizer = Callable[[str], "list[str]"]


def _check_corpus(hypotheses: Sequence[str], references: Sequence[str]) -> None:
    if len(hypotheses) != len(references):
        raise ValueError(
            f"{len(hypotheses)} hypotheses vs {len(references)} references"
        )
    if not hypotheses:
        raise ValueError("empty corpus")


# ---------------------------------------------------------------------------
# BLEU

def _word_ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


@dataclass(frozen=True)
class BleuStats:
    """Per-segment sufficient statistics; resampling sums rows.

    Column layout: correct_1..correct_4, total_1..total_4, sys_len, ref_len.
    """

    rows: np.ndarray
    smoothing: str = "exp"

    @property
    def n_segments(self) -> int:
        return int(self.rows.shape[0])

    def full_score(self) -> float:
        return _bleu_from_sums(self.rows.sum(axis=0)[None, :], self.smoothing)[0]

    def scores_for(self, indices: np.ndarray) -> np.ndarray:
        sums = self.rows[indices].sum(axis=1)
        return _bleu_from_sums(sums, self.smoothing)


def bleu_sufficient_stats(
    hypotheses: Sequence[str],
    references: Sequence[str],
    tokenizer: Tokenizer = tokenize_13a,
    smoothing: str = "exp",
) -> BleuStats:
    _check_corpus(hypotheses, references)
    rows = np.zeros((len(hypotheses), 2 * BLEU_MAX_ORDER + 2), dtype=np.float64)
    for i, (hyp, ref) in enumerate(zip(hypotheses, references)):
        hyp_tokens = tokenizer(hyp)
        ref_tokens = tokenizer(ref)
        for n in range(1, BLEU_MAX_ORDER + 1):
            hyp_ngrams = _word_ngrams(hyp_tokens, n)
            ref_ngrams = _word_ngrams(ref_tokens, n)
            rows[i, n - 1] = sum(
                min(count, ref_ngrams.get(ngram, 0)) for ngram, count in hyp_ngrams.items()
            )
            rows[i, BLEU_MAX_ORDER + n - 1] = sum(hyp_ngrams.values())
        rows[i, 2 * BLEU_MAX_ORDER] = len(hyp_tokens)
        rows[i, 2 * BLEU_MAX_ORDER + 1] = len(ref_tokens)
    return BleuStats(rows=rows, smoothing=smoothing)


def _bleu_from_sums(sums: np.ndarray, smoothing: str) -> np.ndarray:
    """Corpus BLEU for each row of summed sufficient statistics."""
    correct = sums[:, :BLEU_MAX_ORDER]
    total = sums[:, BLEU_MAX_ORDER : 2 * BLEU_MAX_ORDER]
    sys_len = sums[:, 2 * BLEU_MAX_ORDER]
    ref_len = sums[:, 2 * BLEU_MAX_ORDER + 1]

    scores = np.zeros(sums.shape[0], dtype=np.float64)
    for r in range(sums.shape[0]):
        log_sum = 0.0
        orders = 0
        zeros = 0
        dead = False
        for n in range(BLEU_MAX_ORDER):
            if total[r, n] == 0:
                continue  # order absent from this corpus entirely
            orders += 1
            if correct[r, n] > 0:
                log_sum += math.log(correct[r, n] / total[r, n])
            elif n == 0 or smoothing != "exp":
                dead = True
                break
            else:
                zeros += 1
                log_sum += math.log(1.0 / (2.0**zeros * total[r, n]))
        if dead or orders == 0 or sys_len[r] == 0:
            scores[r] = 0.0
            continue
        precision = math.exp(log_sum / orders)
        bp = 1.0 if sys_len[r] >= ref_len[r] else math.exp(1.0 - ref_len[r] / sys_len[r])
        scores[r] = 100.0 * bp * precision
    return scores


def bleu(
    hypotheses: Sequence[str],
    references: Sequence[str],
    *,
    tokenizer: Tokenizer = tokenize_13a,
    smoothing: str = "exp",
) -> CorpusScore:
    """Corpus-level BLEU on a 0-100 scale."""
    if smoothing not in ("exp", "none"):
        raise ValueError(f"unknown smoothing {smoothing!r}; use 'exp' or 'none'")
    stats = bleu_sufficient_stats(hypotheses, references, tokenizer, smoothing)
    return CorpusScore(metric=MetricId.BLEU, value=stats.full_score(), n_segments=stats.n_segments)


# ---------------------------------------------------------------------------
# chrF2

def _char_ngrams(text: str, n: int) -> Counter:
    return Counter(text[i : i + n] for i in range(len(text) - n + 1))


def _segment_chrf(hyp: str, ref: str, max_order: int, beta: float) -> float:
    hyp_chars = re.sub(r"\s+", "", hyp)
    ref_chars = re.sub(r"\s+", "", ref)
    if not hyp_chars and not ref_chars:
        return 1.0
    precision_sum = 0.0
    recall_sum = 0.0
    orders = 0
    for n in range(1, max_order + 1):
        hyp_ngrams = _char_ngrams(hyp_chars, n)
        ref_ngrams = _char_ngrams(ref_chars, n)
        hyp_total = sum(hyp_ngrams.values())
        ref_total = sum(ref_ngrams.values())
        if hyp_total == 0 or ref_total == 0:
            continue
        overlap = sum((hyp_ngrams & ref_ngrams).values())
        precision_sum += overlap / hyp_total
        recall_sum += overlap / ref_total
        orders += 1
    if orders == 0:
        return 0.0
    precision = precision_sum / orders
    recall = recall_sum / orders
    if precision + recall == 0.0:
        return 0.0
    beta_sq = beta * beta
    return (1 + beta_sq) * precision * recall / (beta_sq * precision + recall)


def chrf2_segment_scores(
    hypotheses: Sequence[str],
    references: Sequence[str],
    *,
    max_order: int = CHRF_MAX_ORDER,
    beta: float = CHRF_BETA,
) -> list[float]:
    """Per-segment chrF2 on a 0-100 scale (the corpus score is their mean)."""
    _check_corpus(hypotheses, references)
    return [
        100.0 * _segment_chrf(hyp, ref, max_order, beta)
        for hyp, ref in zip(hypotheses, references)
    ]


def chrf2(
    hypotheses: Sequence[str],
    references: Sequence[str],
    *,
    max_order: int = CHRF_MAX_ORDER,
    beta: float = CHRF_BETA,
) -> CorpusScore:
    """Macro-averaged character n-gram F-score, 0-100."""
    values = chrf2_segment_scores(hypotheses, references, max_order=max_order, beta=beta)
    return CorpusScore(
        metric=MetricId.CHRF2, value=float(np.mean(values)), n_segments=len(values)
    )


# ---------------------------------------------------------------------------
# TER

def _levenshtein(a: Sequence[str], b: Sequence[str]) -> int:
    if len(a) > len(b):
        a, b = b, a
    prev = list(range(len(a) + 1))
    for j, bj in enumerate(b, start=1):
        cur = [j]
        for i, ai in enumerate(a, start=1):
            if ai == bj:
                cur.append(prev[i - 1])
            else:
                cur.append(1 + min(prev[i - 1], prev[i], cur[-1]))
        prev = cur
    return prev[-1]


def _apply_shift(tokens: list[str], i: int, length: int, j: int) -> list[str]:
    """Move tokens[i:i+length] so it starts at reference position j."""
    block = tokens[i : i + length]
    rest = tokens[:i] + tokens[i + length :]
    p = min(j, len(rest))
    return rest[:p] + block + rest[p:]


def _candidate_shifts(
    hyp: list[str],
    ref_positions: dict[tuple[str, ...], list[int]],
    max_block: int,
    max_dist: int,
):
    for length in range(1, min(max_block, len(hyp)) + 1):
        for i in range(len(hyp) - length + 1):
            block = tuple(hyp[i : i + length])
            for j in ref_positions.get(block, ()):
                if j == i or abs(i - j) > max_dist:
                    continue
                yield i, length, j


def _ref_block_positions(ref: list[str], max_block: int) -> dict[tuple[str, ...], list[int]]:
    positions: dict[tuple[str, ...], list[int]] = {}
    for length in range(1, min(max_block, len(ref)) + 1):
        for j in range(len(ref) - length + 1):
            positions.setdefault(tuple(ref[j : j + length]), []).append(j)
    return positions


def ter_segment_edits(
    hyp_tokens: Sequence[str],
    ref_tokens: Sequence[str],
    *,
    max_block_size: int = TER_MAX_BLOCK_SIZE,
    max_shift_distance: int = TER_MAX_SHIFT_DISTANCE,
) -> int:
    """Shift-aware edit count for one tokenized segment."""
    hyp = list(hyp_tokens)
    ref = list(ref_tokens)
    edits = _levenshtein(hyp, ref)
    if edits == 0:
        return 0
    ref_positions = _ref_block_positions(ref, max_block_size)
    shifts = 0
    while edits > 0:
        best: Optional[tuple[int, list[str]]] = None
        for i, length, j in _candidate_shifts(hyp, ref_positions, max_block_size, max_shift_distance):
            shifted = _apply_shift(hyp, i, length, j)
            if shifted == hyp:
                continue
            new_edits = _levenshtein(shifted, ref)
            if new_edits < edits and (best is None or new_edits < best[0]):
                best = (new_edits, shifted)
        if best is None:
            break
        shifts += 1
        edits, hyp = best
    return shifts + edits


@dataclass(frozen=True)
class TerStats:
    """Per-segment edit counts and reference lengths; resampling sums both."""

    edits: np.ndarray
    ref_lengths: np.ndarray

    @property
    def n_segments(self) -> int:
        return int(self.edits.shape[0])

    def full_score(self) -> float:
        total_ref = float(self.ref_lengths.sum())
        if total_ref == 0:
            raise ValueError("TER is undefined for an empty reference corpus")
        return 100.0 * float(self.edits.sum()) / total_ref

    def scores_for(self, indices: np.ndarray) -> np.ndarray:
        edits = self.edits[indices].sum(axis=1)
        refs = self.ref_lengths[indices].sum(axis=1)
        if np.any(refs == 0):
            raise ValueError("TER resample drew only empty references")
        return 100.0 * edits / refs


def ter_sufficient_stats(
    hypotheses: Sequence[str],
    references: Sequence[str],
    *,
    tokenizer: Tokenizer = tokenize_13a,
    max_block_size: int = TER_MAX_BLOCK_SIZE,
    max_shift_distance: int = TER_MAX_SHIFT_DISTANCE,
) -> TerStats:
    _check_corpus(hypotheses, references)
    edits = np.zeros(len(hypotheses), dtype=np.float64)
    ref_lengths = np.zeros(len(hypotheses), dtype=np.float64)
    for i, (hyp, ref) in enumerate(zip(hypotheses, references)):
        hyp_tokens = tokenizer(hyp)
        ref_tokens = tokenizer(ref)
        edits[i] = ter_segment_edits(
            hyp_tokens,
            ref_tokens,
            max_block_size=max_block_size,
            max_shift_distance=max_shift_distance,
        )
        ref_lengths[i] = len(ref_tokens)
    return TerStats(edits=edits, ref_lengths=ref_lengths)


def ter(
    hypotheses: Sequence[str],
    references: Sequence[str],
    *,
    tokenizer: Tokenizer = tokenize_13a,
    max_block_size: int = TER_MAX_BLOCK_SIZE,
    max_shift_distance: int = TER_MAX_SHIFT_DISTANCE,
) -> CorpusScore:
    """Translation edit rate: total edits per 100 reference tokens (lower
    is better, values above 100 are legal)."""
    stats = ter_sufficient_stats(
        hypotheses,
        references,
        tokenizer=tokenizer,
        max_block_size=max_block_size,
        max_shift_distance=max_shift_distance,
    )
    return CorpusScore(metric=MetricId.TER, value=stats.full_score(), n_segments=stats.n_segments)


SURFACE_METRICS = {
    MetricId.BLEU: bleu,
    MetricId.CHRF2: chrf2,
    MetricId.TER: ter,
}
