"""Sentence segmentation, embedding alignment, threshold filtering, and the
benchmark / training-mixture pipelines.

Alignment policies:

* ``nearest``: every source is paired with its argmax-cosine target; ties go
  to the lowest target index.  Targets may be reused.
* ``greedy_one_to_one`` (default): candidate pairs are sorted by similarity
  descending (ties by source index, then target index) and accepted when
  neither side has been used yet.

Threshold filtering keeps a pair iff ``similarity >= theta`` (inclusive, so
exact-1.0 translations survive a theta of 1.0).

Embedding requests go out as one batch per corpus side; everything after
embedding is pure and safe to parallelize per pair.  Provider instances
declare their own concurrency contract (the mock is a pure function, the
subprocess client is single-flight with internal queueing).
"""

from __future__ import annotations

import enum
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .corpus import (
    CorpusStage,
    LanguagePair,
    ParallelCorpus,
    PairOrigin,
    Segment,
    SegmentPair,
)
from .embedding import cosine_matrix, embed
from .errors import LuxkitError, PipelineStageError
from .preprocess import QuotePolicy, dedup, filter_min_source_length, standardize_quotes

logger = logging.getLogger(__name__)

# Sentence-final punctuation followed by whitespace and an upper-case or
# quote-opening character splits; these abbreviations never do.
SENTENCE_TERMINALS = ".!?…"
DEFAULT_ABBREVIATIONS = frozenset(
    {
        "z.B.",
        "d.h.",
        "e.a.",
        "u.a.",
        "etc.",
        "bzw.",
        "ca.",
        "vs.",
        "resp.",
        "Dr.",
        "Prof.",
        "Nr.",
        "Hr.",
        "Mme.",
        "St.",
    }
)

_CLOSERS = "»”’'\")]"
_OPENERS = "«„“‘‚\"'([‹"


def _is_upperish(ch: str) -> bool:
    return ch.isupper() or ch.isdigit()


def segment_sentences(
    text: str,
    lang: str = "und",
    doc_id: Optional[str] = None,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> list[Segment]:
    """Rule-based sentence splitter.

    Splits after a run of sentence-final punctuation (plus closing quotes)
    that is followed by whitespace and an upper-case letter, digit, or
    opening quote.  Known abbreviations and single-letter initials ("J.")
    are protected.  This deliberately trades linguistic coverage for
    determinism; it is not a statistical segmenter.
    """
    boundaries: list[int] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch not in SENTENCE_TERMINALS:
            i += 1
            continue
        j = i
        while j < n and text[j] in SENTENCE_TERMINALS:
            j += 1
        while j < n and text[j] in _CLOSERS:
            j += 1
        k = j
        while k < n and text[k].isspace():
            k += 1
        if k == j or k >= n:
            i = j
            continue
        nxt = text[k]
        if nxt in _OPENERS:
            m = k + 1
            while m < n and text[m] in _OPENERS:
                m += 1
            starts_sentence = m < n and _is_upperish(text[m])
        else:
            starts_sentence = _is_upperish(nxt)
        if starts_sentence and not _ends_with_abbreviation(text, j, abbreviations):
            boundaries.append(j)
        i = j

    pieces = []
    start = 0
    for b in boundaries:
        pieces.append(text[start:b])
        start = b
    pieces.append(text[start:])

    segments = []
    prefix = doc_id if doc_id is not None else "doc"
    for idx, piece in enumerate(p.strip() for p in pieces):
        if piece:
            segments.append(
                Segment(id=f"{prefix}:s{len(segments)}", text=piece, lang=lang, doc_id=doc_id)
            )
    return segments


def _ends_with_abbreviation(text: str, end: int, abbreviations: frozenset[str]) -> bool:
    if end == 0 or text[end - 1] != ".":
        return False
    head = text[:end]
    last = head.split()[-1] if head.split() else ""
    if last in abbreviations:
        return True
    # Single-letter initials such as "J." in names.
    return len(last) == 2 and last[0].isalpha() and last[0].isupper()


class AlignPolicy(enum.Enum):
    NEAREST = "nearest"
    GREEDY_ONE_TO_ONE = "greedy_one_to_one"


@dataclass(frozen=True)
class FilterThreshold:
    """Similarity cutoff; pairs are kept iff similarity >= theta."""

    theta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"threshold must be in [0, 1], got {self.theta}")


def align(
    sources: Sequence[Segment],
    targets: Sequence[Segment],
    provider,
    policy: AlignPolicy = AlignPolicy.GREEDY_ONE_TO_ONE,
) -> list[SegmentPair]:
    """Pair source segments with target segments by embedding cosine."""
    if not sources or not targets:
        raise ValueError("alignment needs non-empty source and target segment lists")
    src_vecs = np.vstack(embed([s.text for s in sources], provider))
    tgt_vecs = np.vstack(embed([t.text for t in targets], provider))
    sims = cosine_matrix(src_vecs, tgt_vecs)

    pairs: list[SegmentPair] = []
    if policy is AlignPolicy.NEAREST:
        for i, source in enumerate(sources):
            j = int(np.argmax(sims[i]))  # argmax returns the lowest tied index
            pairs.append(
                SegmentPair(
                    source=source,
                    target=targets[j],
                    similarity=float(sims[i, j]),
                    origin=PairOrigin.ALIGNED,
                )
            )
        return pairs

    candidates = sorted(
        ((i, j) for i in range(len(sources)) for j in range(len(targets))),
        key=lambda ij: (-sims[ij[0], ij[1]], ij[0], ij[1]),
    )
    used_src: set[int] = set()
    used_tgt: set[int] = set()
    chosen: list[tuple[int, int]] = []
    for i, j in candidates:
        if i in used_src or j in used_tgt:
            continue
        used_src.add(i)
        used_tgt.add(j)
        chosen.append((i, j))
    chosen.sort()
    for i, j in chosen:
        pairs.append(
            SegmentPair(
                source=sources[i],
                target=targets[j],
                similarity=float(sims[i, j]),
                origin=PairOrigin.ALIGNED,
            )
        )
    return pairs


def filter_by_threshold(
    pairs: Iterable[SegmentPair], threshold: Union[FilterThreshold, float]
) -> list[SegmentPair]:
    """Keep pairs with similarity >= theta, preserving order."""
    if not isinstance(threshold, FilterThreshold):
        threshold = FilterThreshold(float(threshold))
    pairs = list(pairs)
    for idx, pair in enumerate(pairs):
        if pair.similarity is None:
            raise LuxkitError(f"pair {idx} has no similarity; align or rescore first")
    kept = [p for p in pairs if p.similarity >= threshold.theta]
    if pairs:
        logger.info(
            "threshold %.4f kept %d/%d pairs (%.1f%%)",
            threshold.theta,
            len(kept),
            len(pairs),
            100.0 * len(kept) / len(pairs),
        )
    return kept


def top_k_by_similarity(pairs: Iterable[SegmentPair], k: int) -> list[SegmentPair]:
    """The k most similar pairs, sorted descending; ties keep input order."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    pairs = list(pairs)
    for idx, pair in enumerate(pairs):
        if pair.similarity is None:
            raise LuxkitError(f"pair {idx} has no similarity; align or rescore first")
    ranked = sorted(pairs, key=lambda p: -p.similarity)  # sorted() is stable
    return ranked[: min(k, len(ranked))]


# ---------------------------------------------------------------------------
# Benchmark construction


@dataclass(frozen=True)
class BenchmarkResult:
    corpus: ParallelCorpus
    review_rows: tuple[tuple[str, str, float], ...]


def export_review_tsv(rows: Iterable[tuple[str, str, float]], path: Union[str, Path]) -> None:
    """Write the human-review sheet: src, tgt, sim, blank verdict column."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write("src\ttgt\tsim\tverdict\n")
        for src, tgt, sim in rows:
            fh.write(f"{src}\t{tgt}\t{sim:.6f}\t\n")


def build_benchmark(
    source_docs: Sequence[str],
    target_docs: Sequence[str],
    lp: Union[LanguagePair, str],
    provider,
    k: int = 500,
    *,
    min_words: int = 5,
    quote_policy: Optional[QuotePolicy] = None,
    align_policy: AlignPolicy = AlignPolicy.GREEDY_ONE_TO_ONE,
    review_path: Optional[Union[str, Path]] = None,
) -> BenchmarkResult:
    """Run the full benchmark pipeline on raw documents.

    Order: segment, standardize quotes, align, minimum source length,
    dedup, top-k by similarity.  The selection is exported as a review
    sheet rather than auto-verified; verdicts are a human's job.
    """
    if isinstance(lp, str):
        lp = LanguagePair.parse(lp)
    policy = quote_policy or QuotePolicy()

    def stage(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except LuxkitError as exc:
            raise PipelineStageError(name, str(exc)) from exc
        except ValueError as exc:
            raise PipelineStageError(name, str(exc)) from exc

    def segment_side(docs: Sequence[str], lang: str) -> list[Segment]:
        segments: list[Segment] = []
        for di, doc in enumerate(docs):
            segments.extend(segment_sentences(doc, lang=lang, doc_id=f"d{di}"))
        # doc-scoped ids collide across documents; rewrite to corpus-unique ids
        return [
            Segment(id=f"{lang}:{i}", text=s.text, lang=lang, doc_id=s.doc_id)
            for i, s in enumerate(segments)
        ]

    sources = stage("segment", segment_side, source_docs, lp.source)
    targets = stage("segment", segment_side, target_docs, lp.target)
    if not sources or not targets:
        raise PipelineStageError("segment", "no sentences found in the input documents")

    def standardize_side(segments: list[Segment], lang: str) -> list[Segment]:
        return [
            Segment(
                id=s.id,
                text=standardize_quotes(s.text, lang, policy),
                lang=lang,
                doc_id=s.doc_id,
            )
            for s in segments
        ]

    sources = stage("standardize_quotes", standardize_side, sources, lp.source)
    targets = stage("standardize_quotes", standardize_side, targets, lp.target)

    pairs = stage("align", align, sources, targets, provider, align_policy)
    corpus = ParallelCorpus(lp=lp, pairs=tuple(pairs), stage=CorpusStage.ALIGNED)

    corpus = stage("filter_min_source_length", filter_min_source_length, corpus, min_words)
    corpus = stage("dedup", dedup, corpus)
    selected = stage("top_k_by_similarity", top_k_by_similarity, corpus.pairs, k)
    corpus = corpus.with_pairs(selected, CorpusStage.SELECTED)

    if not corpus.pairs:
        logger.warning("benchmark for %s is empty after filtering", lp)

    review = tuple((p.source.text, p.target.text, float(p.similarity)) for p in corpus.pairs)
    if review_path is not None:
        export_review_tsv(review, review_path)
    return BenchmarkResult(corpus=corpus, review_rows=review)


# ---------------------------------------------------------------------------
# Instruction-tuning mixture


LANGUAGE_NAMES = {
    "lb": "Luxembourgish",
    "fr": "French",
    "en": "English",
    "de": "German",
}

TARGET_LANGUAGE_PLACEHOLDER = "[Target Language]"
SOURCE_SEGMENT_PLACEHOLDER = "[source segment]"
DEFAULT_PROMPT_TEMPLATE = "Translate from Luxembourgish to [Target Language]: [source segment]"


@dataclass(frozen=True)
class PromptTemplate:
    """Instruction template with target-language and source placeholders."""

    template: str = DEFAULT_PROMPT_TEMPLATE

    def __post_init__(self):
        for placeholder in (TARGET_LANGUAGE_PLACEHOLDER, SOURCE_SEGMENT_PLACEHOLDER):
            if self.template.count(placeholder) != 1:
                raise ValueError(
                    f"template must contain {placeholder!r} exactly once: {self.template!r}"
                )

    def render(self, target_language: str, source_text: str) -> str:
        return self.template.replace(TARGET_LANGUAGE_PLACEHOLDER, target_language).replace(
            SOURCE_SEGMENT_PLACEHOLDER, source_text
        )


@dataclass(frozen=True)
class InstructionRecord:
    prompt: str
    completion: str
    lp: str
    source_name: str


@dataclass(frozen=True)
class MixtureResult:
    records: tuple[InstructionRecord, ...]
    manifest: dict


def language_name(code: str, names: Optional[dict] = None) -> str:
    names = names or LANGUAGE_NAMES
    try:
        return names[code]
    except KeyError:
        raise LuxkitError(f"no display name configured for language {code!r}") from None


def build_training_mixture(
    sources: Sequence[tuple[ParallelCorpus, float]],
    template: Optional[PromptTemplate] = None,
    target_langs: Optional[Sequence[str]] = None,
    *,
    seed: int = 0,
    source_names: Optional[Sequence[str]] = None,
) -> MixtureResult:
    """Threshold-filter, dedup, and prompt-template each source corpus, then
    shuffle everything with a seeded RNG.

    The manifest records per-source and per-language-pair counts, the
    thresholds, and the shuffle seed, so a mixture build is reproducible
    and auditable.
    """
    template = template or PromptTemplate()
    records: list[InstructionRecord] = []
    per_source: list[dict] = []
    per_lp: dict[str, int] = {}

    for idx, (corpus, theta) in enumerate(sources):
        name = source_names[idx] if source_names else str(corpus.meta.get("name", f"source{idx}"))
        if target_langs is not None and corpus.lp.target not in target_langs:
            per_source.append(
                {"name": name, "lp": str(corpus.lp), "threshold": theta, "count": 0, "skipped": True}
            )
            continue
        kept_pairs = filter_by_threshold(corpus.pairs, theta) if corpus.pairs else []
        filtered = corpus.with_pairs(kept_pairs, CorpusStage.FILTERED)
        deduped = dedup(filtered)
        target_name = language_name(corpus.lp.target)
        count = 0
        for pair in deduped.pairs:
            records.append(
                InstructionRecord(
                    prompt=template.render(target_name, pair.source.text),
                    completion=pair.target.text,
                    lp=str(corpus.lp),
                    source_name=name,
                )
            )
            count += 1
        per_lp[str(corpus.lp)] = per_lp.get(str(corpus.lp), 0) + count
        entry = {"name": name, "lp": str(corpus.lp), "threshold": theta, "count": count}
        if "provenance" in corpus.meta:
            entry["provenance"] = corpus.meta["provenance"]
        per_source.append(entry)

    random.Random(seed).shuffle(records)
    manifest = {
        "seed": seed,
        "template": template.template,
        "sources": per_source,
        "per_language_pair": per_lp,
        "total": len(records),
    }
    return MixtureResult(records=tuple(records), manifest=manifest)


def save_mixture(result: MixtureResult, path: Union[str, Path], manifest_path: Optional[Union[str, Path]] = None) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for rec in result.records:
            fh.write(
                json.dumps(
                    {
                        "prompt": rec.prompt,
                        "completion": rec.completion,
                        "lp": rec.lp,
                        "source": rec.source_name,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    manifest_path = Path(manifest_path) if manifest_path else path.with_suffix(".manifest.json")
    manifest_path.write_text(
        json.dumps(result.manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# External translator adapter (augmentation is an upstream step; the toolkit
# only models the interface and records provenance)


class StubTranslator:
    """Placeholder translator used to wire augmentation pipelines in tests.

    Marks each output so nobody mistakes stub output for a real translation.
    """

    name = "stub-translator"

    def translate(self, texts: Sequence[str], source_lang: str, target_lang: str) -> list[str]:
        return [f"[{source_lang}>{target_lang}] {t}" for t in texts]


def augment_monolingual(
    segments: Sequence[Segment],
    translator,
    lp: Union[LanguagePair, str],
) -> ParallelCorpus:
    """Pair monolingual segments with machine translations of themselves.

    The resulting corpus records the translator in its metadata; pairs are
    origin=given (no alignment similarity exists until rescoring).
    """
    if isinstance(lp, str):
        lp = LanguagePair.parse(lp)
    texts = [s.text for s in segments]
    translations = translator.translate(texts, lp.source, lp.target)
    if len(translations) != len(texts):
        raise LuxkitError(
            f"translator {getattr(translator, 'name', '?')} returned "
            f"{len(translations)} translations for {len(texts)} segments"
        )
    pairs = []
    for i, (segment, translation) in enumerate(zip(segments, translations)):
        pairs.append(
            SegmentPair(
                source=Segment(id=segment.id, text=segment.text, lang=lp.source, doc_id=segment.doc_id),
                target=Segment(id=f"{segment.id}.mt", text=translation, lang=lp.target),
                similarity=None,
                origin=PairOrigin.GIVEN,
            )
        )
    meta = {"provenance": f"augmented via {getattr(translator, 'name', 'external translator')}"}
    return ParallelCorpus(lp=lp, pairs=tuple(pairs), stage=CorpusStage.RAW, meta=meta)


def rescore_pairs(corpus: ParallelCorpus, provider) -> ParallelCorpus:
    """Attach embedding cosine similarities to every pair of a corpus."""
    if not corpus.pairs:
        return corpus
    src_vecs = np.vstack(embed([p.source.text for p in corpus.pairs], provider))
    tgt_vecs = np.vstack(embed([p.target.text for p in corpus.pairs], provider))
    na = np.linalg.norm(src_vecs, axis=1)
    nb = np.linalg.norm(tgt_vecs, axis=1)
    if np.any(na == 0.0) or np.any(nb == 0.0):
        raise LuxkitError("cannot rescore: zero-norm embedding encountered")
    sims = np.clip(np.sum(src_vecs * tgt_vecs, axis=1) / (na * nb), -1.0, 1.0)
    pairs = [
        SegmentPair(source=p.source, target=p.target, similarity=float(s), origin=p.origin)
        for p, s in zip(corpus.pairs, sims)
    ]
    return corpus.with_pairs(pairs, corpus.stage)
