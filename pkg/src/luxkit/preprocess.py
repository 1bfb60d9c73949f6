"""Text normalization and corpus filtering applied before alignment and scoring.

The quote set is fixed and explicit so that quote standardization and
stripping are bit-reproducible:

double quotes:  " (U+0022)  “ ” (curly)  „ ‟ (low/high-9)  « » (guillemets)
single quotes:  ' (U+0027)  ‘ ’ (curly)  ‚ ‛ (low/high-9)  ‹ › (single guillemets)

Words are maximal non-whitespace runs; Luxembourgish needs nothing fancier.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .corpus import CorpusStage, ParallelCorpus, Segment, SegmentPair

DOUBLE_QUOTE_CHARS = frozenset('"“”„‟«»')
SINGLE_QUOTE_CHARS = frozenset("'‘’‚‛‹›")
QUOTE_CHARS = DOUBLE_QUOTE_CHARS | SINGLE_QUOTE_CHARS

_STRIP_TABLE = {ord(c): None for c in QUOTE_CHARS}


class QuoteMode(enum.Enum):
    STANDARDIZE = "standardize"
    STRIP = "strip"


@dataclass(frozen=True)
class QuotePolicy:
    """How to treat quotation marks for each language.

    ``targets`` maps a language code to its (double, single) target quote
    characters; languages not listed fall back to ``default_targets``.
    """

    mode: QuoteMode = QuoteMode.STANDARDIZE
    targets: Mapping[str, tuple[str, str]] = field(default_factory=dict)
    default_targets: tuple[str, str] = ('"', "'")

    def targets_for(self, lang: str) -> tuple[str, str]:
        return self.targets.get(lang, self.default_targets)


def standardize_quotes(text: str, lang: str, policy: Optional[QuotePolicy] = None) -> str:
    """Map every character of the quote set to the language's target quotes."""
    policy = policy or QuotePolicy()
    if policy.mode is not QuoteMode.STANDARDIZE:
        raise ValueError("standardize_quotes requires a policy in standardize mode")
    double, single = policy.targets_for(lang)
    table = {ord(c): double for c in DOUBLE_QUOTE_CHARS}
    table.update({ord(c): single for c in SINGLE_QUOTE_CHARS})
    return text.translate(table)


def strip_quotes(text: str) -> str:
    """Remove every character of the quote set; all other characters stay."""
    return text.translate(_STRIP_TABLE)


def word_count(text: str) -> int:
    """Number of maximal non-whitespace runs."""
    return len(text.split())


def _replace_segment_text(segment: Segment, text: str) -> Segment:
    return Segment(id=segment.id, text=text, lang=segment.lang, doc_id=segment.doc_id)


def apply_quote_policy(corpus: ParallelCorpus, policy: QuotePolicy) -> ParallelCorpus:
    """Standardize or strip quotes on both sides of every pair."""
    new_pairs = []
    for pair in corpus.pairs:
        if policy.mode is QuoteMode.STRIP:
            src_text = strip_quotes(pair.source.text)
            tgt_text = strip_quotes(pair.target.text)
        else:
            src_text = standardize_quotes(pair.source.text, pair.source.lang, policy)
            tgt_text = standardize_quotes(pair.target.text, pair.target.lang, policy)
        new_pairs.append(
            SegmentPair(
                source=_replace_segment_text(pair.source, src_text),
                target=_replace_segment_text(pair.target, tgt_text),
                similarity=pair.similarity,
                origin=pair.origin,
            )
        )
    return corpus.with_pairs(new_pairs, CorpusStage.STANDARDIZED)


def filter_min_source_length(corpus: ParallelCorpus, min_words: int) -> ParallelCorpus:
    """Drop pairs whose source has fewer than ``min_words`` words.

    The boundary is inclusive: a source of exactly ``min_words`` words
    survives ("shorter than five words" removes lengths 1..4).
    """
    if min_words < 1:
        raise ValueError(f"min_words must be >= 1, got {min_words}")
    kept = [p for p in corpus.pairs if word_count(p.source.text) >= min_words]
    return corpus.with_pairs(kept, CorpusStage.FILTERED)


def _dedup_key(pair: SegmentPair) -> tuple[str, str]:
    # Trim plus NFC; Segment text is already NFC-normalized, the second
    # normalize is belt and braces for hand-built segments.
    return (
        unicodedata.normalize("NFC", pair.source.text.strip()),
        unicodedata.normalize("NFC", pair.target.text.strip()),
    )


def dedup(corpus: ParallelCorpus) -> ParallelCorpus:
    """Keep the first occurrence of each (source text, target text) pair."""
    seen: set[tuple[str, str]] = set()
    kept = []
    for pair in corpus.pairs:
        key = _dedup_key(pair)
        if key in seen:
            continue
        seen.add(key)
        kept.append(pair)
    return corpus.with_pairs(kept, CorpusStage.DEDUPED)
