"""Corpus curation and MT evaluation toolkit for Luxembourgish language pairs.

The public surface re-exports the pieces most workflows need; the
submodules group the rest:

* ``corpus``: domain types and corpus / fixture file I/O
* ``preprocess``: quote handling, length filtering, deduplication
* ``embedding`` / ``align``: providers, cosine alignment, pipelines
* ``metrics``: native BLEU, chrF2, TER
* ``gateway``: external neural metrics and the embedding QE score
* ``stats``: paired bootstrap and rank correlations
* ``report``: averaging, deltas, accuracy bands, rendering
* ``cli``: the ``luxkit`` command
"""

from .align import (
    AlignPolicy,
    FilterThreshold,
    PromptTemplate,
    align,
    build_benchmark,
    build_training_mixture,
    filter_by_threshold,
    segment_sentences,
    top_k_by_similarity,
)
from .corpus import (
    CorpusStage,
    LanguagePair,
    MetricId,
    METRIC_COLUMN_ORDER,
    ParallelCorpus,
    PairOrigin,
    Segment,
    SegmentPair,
    SegmentScores,
    load_corpus,
    load_score_fixture,
    save_corpus,
)
from .embedding import MockHashProvider, PrecomputedFileProvider, SubprocessProvider, cosine, embed
from .errors import LuxkitError
from .gateway import EvalSegment, QeNormalization, external_score, qe_luxembedder, system_score
from .metrics import CorpusScore, bleu, chrf2, ter, tokenize_13a
from .preprocess import (
    QuoteMode,
    QuotePolicy,
    dedup,
    filter_min_source_length,
    standardize_quotes,
    strip_quotes,
    word_count,
)
from .report import (
    AccuracyBandTable,
    SystemReport,
    accuracy_estimate,
    average_across_pairs,
    build_report,
    delta,
    render_report,
)
from .stats import (
    BootstrapConfig,
    CorrelationResult,
    SignificanceResult,
    correlation_pvalue,
    kendall_tau_b,
    paired_bootstrap,
    spearman_rho,
    system_correlation_matrix,
)

__version__ = "0.1.0"
