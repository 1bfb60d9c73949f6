"""Domain types and file I/O for parallel corpora, score tables, and run manifests.

A corpus is an ordered list of aligned segment pairs for one language pair.
Two on-disk formats are supported:

* JSONL: one object per line, ``{"id", "src", "tgt", "lp", "sim"}`` with
  ``sim`` optional.  Streamable and lossless.
* TSV: ``src<TAB>tgt(<TAB>sim)``.  Tabs, newlines, and backslashes inside
  texts are backslash-escaped.  Intended for interop with shell tooling.

Both formats get an optional sidecar manifest ``<path>.manifest.json`` that
records the language pair, pipeline stage, and free-form metadata so that
``load(save(c)) == c``.
"""

from __future__ import annotations

import enum
import json
import math
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .errors import CorpusFormatError

# Similarities are persisted at six decimal places, which exceeds every
# tolerance used downstream.
SIMILARITY_DECIMALS = 6

_ISO_ALPHA = set("abcdefghijklmnopqrstuvwxyz")


def _check_lang_code(code: str) -> str:
    if not (2 <= len(code) <= 3) or not set(code) <= _ISO_ALPHA:
        raise ValueError(f"not a lowercase ISO-639 language code: {code!r}")
    return code


@dataclass(frozen=True, order=True)
class LanguagePair:
    """A (source language, target language) direction such as lb->fr."""

    source: str
    target: str

    def __post_init__(self):
        _check_lang_code(self.source)
        _check_lang_code(self.target)
        if self.source == self.target:
            raise ValueError(f"source and target language must differ: {self.source}")

    @classmethod
    def parse(cls, text: str) -> "LanguagePair":
        """Parse "lb-fr" or "lb->fr" into a LanguagePair."""
        norm = text.strip().lower().replace("->", "-").replace("→", "-")
        parts = norm.split("-")
        if len(parts) != 2:
            raise ValueError(f"cannot parse language pair from {text!r}")
        return cls(parts[0], parts[1])

    def __str__(self) -> str:
        return f"{self.source}-{self.target}"


@dataclass(frozen=True)
class Segment:
    """One sentence-like unit of text in a single language.

    Text is NFC-normalized on construction; this keeps deduplication and
    quote handling byte-stable regardless of how the input was encoded.
    """

    id: str
    text: str
    lang: str
    doc_id: Optional[str] = None

    def __post_init__(self):
        normalized = unicodedata.normalize("NFC", self.text)
        object.__setattr__(self, "text", normalized)
        if not normalized:
            raise ValueError(f"segment {self.id!r} has empty text")
        _check_lang_code(self.lang)


class PairOrigin(enum.Enum):
    """Whether a pair was produced by alignment or given as already paired."""

    ALIGNED = "aligned"
    GIVEN = "given"


@dataclass(frozen=True)
class SegmentPair:
    """An aligned (source, target) segment pair, optionally with a similarity."""

    source: Segment
    target: Segment
    similarity: Optional[float] = None
    origin: PairOrigin = PairOrigin.GIVEN

    def __post_init__(self):
        if self.similarity is not None:
            if not math.isfinite(self.similarity) or not -1.0 <= self.similarity <= 1.0:
                raise ValueError(f"similarity outside [-1, 1]: {self.similarity}")
        elif self.origin is PairOrigin.ALIGNED:
            raise ValueError("aligned pairs must carry a similarity score")


class CorpusStage(enum.IntEnum):
    """Pipeline stages in their canonical order; transitions are monotone."""

    RAW = 0
    STANDARDIZED = 1
    FILTERED = 2
    DEDUPED = 3
    ALIGNED = 4
    SELECTED = 5

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "CorpusStage":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown corpus stage: {label!r}") from None


def advance_stage(current: CorpusStage, applied: CorpusStage) -> CorpusStage:
    """Stage after applying a pipeline step: never moves backwards."""
    return max(current, applied)


@dataclass(frozen=True)
class ParallelCorpus:
    """Ordered segment pairs for one language pair, plus pipeline metadata."""

    lp: LanguagePair
    pairs: tuple[SegmentPair, ...]
    stage: CorpusStage = CorpusStage.RAW
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        seen: dict[tuple[str, str], str] = {}
        for i, pair in enumerate(self.pairs):
            if pair.source.lang != self.lp.source or pair.target.lang != self.lp.target:
                raise ValueError(
                    f"pair {i} has languages {pair.source.lang}-{pair.target.lang}, "
                    f"corpus is {self.lp}"
                )
            # one id, one segment: a segment may appear in several pairs
            # (nearest alignment reuses targets) but an id must not name
            # two different texts on the same side
            for side, segment in (("src", pair.source), ("tgt", pair.target)):
                key = (side, segment.id)
                if seen.setdefault(key, segment.text) != segment.text:
                    raise ValueError(
                        f"segment id {segment.id!r} names two different {side} texts"
                    )

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def with_pairs(self, pairs: Iterable[SegmentPair], applied: CorpusStage) -> "ParallelCorpus":
        return replace(self, pairs=tuple(pairs), stage=advance_stage(self.stage, applied))


class MetricId(enum.Enum):
    """Identifiers for the metrics handled by the toolkit."""

    BLEU = "bleu"
    CHRF2 = "chrf2"
    TER = "ter"
    BERTSCORE = "bertscore"
    BLEURT20 = "bleurt20"
    XCOMET_XL = "xcomet_xl"
    LUXEMBEDDER_QE = "luxembedder_qe"

    @classmethod
    def parse(cls, text: str) -> "MetricId":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown metric: {text!r}") from None

    @property
    def lower_better(self) -> bool:
        return self is MetricId.TER

    @property
    def short_label(self) -> str:
        return _METRIC_LABELS[self]


# Column order used by every rendered table: QE first, then the neural
# metrics, then the surface-overlap metrics.
METRIC_COLUMN_ORDER = (
    MetricId.LUXEMBEDDER_QE,
    MetricId.BERTSCORE,
    MetricId.BLEURT20,
    MetricId.XCOMET_XL,
    MetricId.BLEU,
    MetricId.CHRF2,
    MetricId.TER,
)

_METRIC_LABELS = {
    MetricId.LUXEMBEDDER_QE: "LE",
    MetricId.BERTSCORE: "BS",
    MetricId.BLEURT20: "B-20",
    MetricId.XCOMET_XL: "xC-XL",
    MetricId.BLEU: "BLEU",
    MetricId.CHRF2: "chrF2",
    MetricId.TER: "TER",
}


class Orientation(enum.Enum):
    HIGHER_BETTER = "higher_better"
    LOWER_BETTER = "lower_better"


def metric_orientation(metric: MetricId) -> Orientation:
    return Orientation.LOWER_BETTER if metric.lower_better else Orientation.HIGHER_BETTER


@dataclass(frozen=True)
class SegmentScores:
    """Per-segment metric values for one (system, metric, language pair).

    For segment-level metrics the system score is the mean of ``values``.
    BLEU and TER are corpus-level: their recomputed corpus score is carried
    in ``corpus_score`` and takes precedence over the mean.
    """

    system: str
    metric: MetricId
    lp: Optional[LanguagePair]
    values: tuple[float, ...]
    corpus_score: Optional[float] = None
    provenance: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def orientation(self) -> Orientation:
        return metric_orientation(self.metric)

    def __len__(self) -> int:
        return len(self.values)


# ---------------------------------------------------------------------------
# Corpus file I/O


def _round_sim(sim: float) -> float:
    return round(sim, SIMILARITY_DECIMALS)


def _escape_tsv(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def _unescape_tsv(text: str) -> str:
    out = []
    it = iter(range(len(text)))
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            mapped = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt)
            if mapped is not None:
                out.append(mapped)
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def _manifest_path(path: Path) -> Path:
    return path.with_name(path.name + ".manifest.json")


def _make_pair(
    lp: LanguagePair,
    index: int,
    src: str,
    tgt: str,
    sim: Optional[float],
    pair_id: Optional[str] = None,
) -> SegmentPair:
    base = pair_id if pair_id is not None else str(index)
    return SegmentPair(
        source=Segment(id=f"{base}.src", text=src, lang=lp.source),
        target=Segment(id=f"{base}.tgt", text=tgt, lang=lp.target),
        similarity=sim,
        origin=PairOrigin.ALIGNED if sim is not None else PairOrigin.GIVEN,
    )


def load_corpus(
    path: Union[str, Path],
    format: str,
    *,
    lp: Optional[Union[LanguagePair, str]] = None,
) -> ParallelCorpus:
    """Load a parallel corpus from a JSONL or TSV file.

    The language pair comes from (in order of precedence) the ``lp`` argument,
    the sidecar manifest, or the per-record ``lp`` field in JSONL.  Mixed
    language pairs inside one file are an error.
    """
    path = Path(path)
    if format not in ("jsonl", "tsv"):
        raise ValueError(f"unknown corpus format: {format!r}")
    if not path.exists():
        raise CorpusFormatError(f"corpus file not found: {path}")

    if isinstance(lp, str):
        lp = LanguagePair.parse(lp)

    stage = CorpusStage.RAW
    meta: dict = {}
    manifest = _manifest_path(path)
    if manifest.exists():
        try:
            info = json.loads(manifest.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"bad manifest {manifest}: {exc}") from exc
        stage = CorpusStage.from_label(info.get("stage", "raw"))
        meta = dict(info.get("meta", {}))
        if lp is None and "lp" in info:
            lp = LanguagePair.parse(info["lp"])

    rows: list[tuple[str, str, Optional[float], Optional[str]]] = []
    file_lp: Optional[LanguagePair] = lp

    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            if format == "jsonl":
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusFormatError(
                        f"malformed record at line {lineno} of {path}: {exc}"
                    ) from exc
                if not isinstance(rec, dict) or "src" not in rec or "tgt" not in rec:
                    raise CorpusFormatError(
                        f"malformed record at line {lineno} of {path}: "
                        "expected object with 'src' and 'tgt'"
                    )
                rec_lp = LanguagePair.parse(rec["lp"]) if "lp" in rec else None
                if rec_lp is not None:
                    if file_lp is None:
                        file_lp = rec_lp
                    elif rec_lp != file_lp:
                        raise CorpusFormatError(
                            f"mixed language pairs in {path}: {file_lp} vs {rec_lp} "
                            f"at line {lineno}"
                        )
                sim = rec.get("sim")
                rows.append((rec["src"], rec["tgt"], sim, rec.get("id")))
            else:
                cols = line.split("\t")
                if len(cols) < 2 or len(cols) > 3:
                    raise CorpusFormatError(
                        f"malformed record at line {lineno} of {path}: "
                        f"expected 2 or 3 tab-separated columns, got {len(cols)}"
                    )
                sim = None
                if len(cols) == 3:
                    try:
                        sim = float(cols[2])
                    except ValueError as exc:
                        raise CorpusFormatError(
                            f"malformed record at line {lineno} of {path}: "
                            f"bad similarity {cols[2]!r}"
                        ) from exc
                rows.append((_unescape_tsv(cols[0]), _unescape_tsv(cols[1]), sim, None))

    if file_lp is None:
        raise CorpusFormatError(
            f"no language pair for {path}: pass lp=, write a manifest, "
            "or use JSONL records with an 'lp' field"
        )

    pairs = [
        _make_pair(file_lp, i, src, tgt, None if sim is None else float(sim), pair_id)
        for i, (src, tgt, sim, pair_id) in enumerate(rows)
    ]
    return ParallelCorpus(lp=file_lp, pairs=tuple(pairs), stage=stage, meta=meta)


def save_corpus(corpus: ParallelCorpus, path: Union[str, Path], format: str) -> None:
    """Write a corpus (and its manifest sidecar) to disk.

    Round-trip contract: texts, order, and similarities (at six decimals)
    survive ``load_corpus(save_corpus(c))`` for both formats.
    """
    path = Path(path)
    if format not in ("jsonl", "tsv"):
        raise ValueError(f"unknown corpus format: {format!r}")

    try:
        with path.open("w", encoding="utf-8") as fh:
            for i, pair in enumerate(corpus.pairs):
                sim = None if pair.similarity is None else _round_sim(pair.similarity)
                if format == "jsonl":
                    rec = {
                        "id": str(i),
                        "src": pair.source.text,
                        "tgt": pair.target.text,
                        "lp": str(corpus.lp),
                    }
                    if sim is not None:
                        rec["sim"] = sim
                    fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
                else:
                    cols = [_escape_tsv(pair.source.text), _escape_tsv(pair.target.text)]
                    if sim is not None:
                        cols.append(f"{sim:.{SIMILARITY_DECIMALS}f}")
                    fh.write("\t".join(cols) + "\n")
        manifest = {
            "lp": str(corpus.lp),
            "stage": corpus.stage.label,
            "meta": dict(corpus.meta),
        }
        _manifest_path(path).write_text(
            json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise CorpusFormatError(f"cannot write corpus to {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Score fixture


class ScoreRecord(NamedTuple):
    system: str
    lp: LanguagePair
    metric: MetricId
    score: float


def load_score_fixture(path: Union[str, Path]) -> list[ScoreRecord]:
    """Load a system-level score table from a TSV fixture.

    Expected columns: ``system  lp  metric  score`` with a header row.  The
    records must form a complete (system x language pair x metric) grid; a
    missing cell is an error naming the combination.
    """
    path = Path(path)
    if not path.exists():
        raise CorpusFormatError(f"fixture file not found: {path}")

    records: list[ScoreRecord] = []
    seen: dict[tuple[str, LanguagePair, MetricId], float] = {}
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header[:4] != ["system", "lp", "metric", "score"]:
            raise CorpusFormatError(
                f"{path}: expected header 'system\\tlp\\tmetric\\tscore', got {header!r}"
            )
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise CorpusFormatError(f"{path}:{lineno}: expected 4 columns, got {len(cols)}")
            system, lp_text, metric_text, score_text = cols
            try:
                rec = ScoreRecord(
                    system=system,
                    lp=LanguagePair.parse(lp_text),
                    metric=MetricId.parse(metric_text),
                    score=float(score_text),
                )
            except ValueError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
            key = (rec.system, rec.lp, rec.metric)
            if key in seen:
                raise CorpusFormatError(f"{path}:{lineno}: duplicate cell {key}")
            seen[key] = rec.score
            records.append(rec)

    systems = sorted({r.system for r in records})
    lps = sorted({r.lp for r in records})
    metrics = sorted({r.metric for r in records}, key=lambda m: m.value)
    for system in systems:
        for lp in lps:
            for metric in metrics:
                if (system, lp, metric) not in seen:
                    raise CorpusFormatError(
                        f"{path}: missing cell (system={system!r}, lp={lp}, "
                        f"metric={metric.value})"
                    )
    return records


def fixture_columns(
    records: Sequence[ScoreRecord], lp: Union[LanguagePair, str]
) -> tuple[list[str], dict[MetricId, list[float]]]:
    """System names plus per-metric score columns for one language pair.

    Systems are ordered by first appearance in the fixture so that columns
    line up across metrics.
    """
    if isinstance(lp, str):
        lp = LanguagePair.parse(lp)
    systems: list[str] = []
    for rec in records:
        if rec.lp == lp and rec.system not in systems:
            systems.append(rec.system)
    if not systems:
        raise CorpusFormatError(f"fixture has no rows for language pair {lp}")
    table = {(r.system, r.metric): r.score for r in records if r.lp == lp}
    metrics = sorted({r.metric for r in records if r.lp == lp}, key=lambda m: m.value)
    columns: dict[MetricId, list[float]] = {}
    for metric in metrics:
        columns[metric] = [table[(system, metric)] for system in systems]
    return systems, columns
