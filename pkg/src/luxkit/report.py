"""Delta tables, cross-pair averaging, accuracy-band classification, and
report rendering.

Presentation rounding is round-half-up at one decimal and happens only at
render time; every report object keeps full-precision floats.

Accuracy bands translate a metric delta into an estimated probability that
a human judge would agree which system is better.  The toolkit ships only
externally sourced anchor points per metric and interpolates linearly
between them; a delta beyond the last anchor is reported as outside the
table rather than extrapolated.  Metrics with no supported conversion are
marked unmapped.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Optional, Sequence, Union

from .corpus import LanguagePair, MetricId, METRIC_COLUMN_ORDER
from .errors import LuxkitError

BAND_LABELS = (">99%", ">90%", ">66%", "33%–66%", "<33%", "<10%", "<1%")


def round_half_up(value: float, decimals: int = 1) -> float:
    """Round half away from zero at the given number of decimals."""
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def format_1dp(value: float) -> str:
    """One-decimal presentation string, round-half-up ("1.25" -> "1.3")."""
    return str(Decimal(repr(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def classify_band(accuracy: float) -> str:
    """Band label for a human-accuracy estimate in percent.

    The seven legend bands partition the axis: (99, 100] / (90, 99] /
    (66, 90] / [33, 66] / [10, 33) / [1, 10) / [0, 1).
    """
    if accuracy > 99.0:
        return ">99%"
    if accuracy > 90.0:
        return ">90%"
    if accuracy > 66.0:
        return ">66%"
    if accuracy >= 33.0:
        return "33%–66%"
    if accuracy >= 10.0:
        return "<33%"
    if accuracy >= 1.0:
        return "<10%"
    return "<1%"


@dataclass(frozen=True)
class AccuracyBandTable:
    """Per-metric (delta, accuracy%) anchor points plus the unmapped set."""

    anchors: Mapping[MetricId, tuple[tuple[float, float], ...]] = field(default_factory=dict)
    unmapped: frozenset[MetricId] = frozenset({MetricId.TER, MetricId.LUXEMBEDDER_QE})

    def __post_init__(self):
        for metric, points in self.anchors.items():
            deltas = [d for d, _ in points]
            if len(points) < 1 or deltas != sorted(set(deltas)):
                raise ValueError(
                    f"anchor deltas for {metric.value} must be strictly increasing"
                )
            accuracies = [a for _, a in points]
            if accuracies != sorted(accuracies):
                raise ValueError(
                    f"accuracy must be monotone non-decreasing in delta for {metric.value}"
                )


# The two anchor points below are the published MT-Thresholds equivalences
# this toolkit is allowed to hard-code; a delta of zero is uninformative by
# definition (50% pairwise accuracy).  Fuller conversion curves belong in
# user configuration.
DEFAULT_ACCURACY_TABLE = AccuracyBandTable(
    anchors={
        MetricId.BLEURT20: ((0.0, 50.0), (1.0, 78.5)),
        MetricId.BERTSCORE: ((0.0, 50.0), (0.58, 78.5)),
    }
)


@dataclass(frozen=True)
class AccuracyEstimate:
    status: str  # "ok", "unmapped", or "outside_table"
    accuracy: Optional[float] = None
    band: Optional[str] = None


def accuracy_estimate(
    metric: MetricId,
    delta: float,
    table: AccuracyBandTable = DEFAULT_ACCURACY_TABLE,
) -> AccuracyEstimate:
    """Estimated human pairwise accuracy for an absolute metric delta.

    Piecewise-linear interpolation on the metric's anchor points; the sign
    of the delta is reported separately by the caller.
    """
    if metric in table.unmapped:
        return AccuracyEstimate(status="unmapped")
    points = table.anchors.get(metric)
    if points is None:
        raise LuxkitError(
            f"metric {metric.value} has no accuracy table and is not marked unmapped"
        )
    magnitude = abs(delta)
    if magnitude < points[0][0] or magnitude > points[-1][0]:
        return AccuracyEstimate(status="outside_table")
    for (d0, a0), (d1, a1) in zip(points, points[1:]):
        if d0 <= magnitude <= d1:
            t = 0.0 if d1 == d0 else (magnitude - d0) / (d1 - d0)
            accuracy = a0 + t * (a1 - a0)
            return AccuracyEstimate(status="ok", accuracy=accuracy, band=classify_band(accuracy))
    # Single-anchor table and an exact hit.
    accuracy = points[0][1]
    return AccuracyEstimate(status="ok", accuracy=accuracy, band=classify_band(accuracy))


def average_across_pairs(
    per_lp_scores: Mapping[Union[LanguagePair, str], float],
    expected_lps: Optional[Sequence[Union[LanguagePair, str]]] = None,
) -> float:
    """Unweighted mean of one system score per language pair."""
    scores = {str(k): v for k, v in per_lp_scores.items()}
    if expected_lps is not None:
        for lp in expected_lps:
            if str(lp) not in scores:
                raise LuxkitError(f"missing language pair {lp} in per-pair scores")
    if not scores:
        raise LuxkitError("no per-pair scores to average")
    return sum(scores.values()) / len(scores)


def delta(candidate_score, baseline_score) -> float:
    """Candidate minus baseline; refuses to subtract across metrics."""
    cand_metric = getattr(candidate_score, "metric", None)
    base_metric = getattr(baseline_score, "metric", None)
    if cand_metric is not None and base_metric is not None and cand_metric != base_metric:
        raise ValueError(f"metric mismatch: {cand_metric} vs {base_metric}")
    cand = getattr(candidate_score, "value", candidate_score)
    base = getattr(baseline_score, "value", baseline_score)
    return float(cand) - float(base)


@dataclass(frozen=True)
class ReportRow:
    lp: LanguagePair
    metric: MetricId
    delta: float
    significant: bool
    accuracy: Optional[float] = None
    band: Optional[str] = None


@dataclass(frozen=True)
class SystemReport:
    baseline: str
    candidate: str
    rows: tuple[ReportRow, ...]

    def cell(self, lp: LanguagePair, metric: MetricId) -> ReportRow:
        for row in self.rows:
            if row.lp == lp and row.metric == metric:
                return row
        raise KeyError(f"no report row for ({lp}, {metric.value})")


def build_report(
    baseline: str,
    candidate: str,
    baseline_scores: Mapping[tuple, float],
    candidate_scores: Mapping[tuple, float],
    significance: Mapping[tuple, bool],
    *,
    lps: Sequence[Union[LanguagePair, str]],
    metrics: Sequence[MetricId] = METRIC_COLUMN_ORDER,
    accuracy_table: AccuracyBandTable = DEFAULT_ACCURACY_TABLE,
) -> SystemReport:
    """Assemble the delta report for one candidate against one baseline.

    Score mappings are keyed by ``(lp_string, metric)``.  Rows follow the
    given language-pair order, then the fixed metric column order.
    """
    rows = []
    for lp in lps:
        lp_obj = lp if isinstance(lp, LanguagePair) else LanguagePair.parse(lp)
        for metric in metrics:
            key = (str(lp_obj), metric)
            if key not in baseline_scores or key not in candidate_scores:
                raise LuxkitError(f"missing score for {key[0]} {metric.value}")
            d = candidate_scores[key] - baseline_scores[key]
            estimate = (
                accuracy_estimate(metric, d, accuracy_table)
                if metric in accuracy_table.anchors or metric in accuracy_table.unmapped
                else AccuracyEstimate(status="unmapped")
            )
            rows.append(
                ReportRow(
                    lp=lp_obj,
                    metric=metric,
                    delta=d,
                    significant=bool(significance.get(key, False)),
                    accuracy=estimate.accuracy,
                    band=estimate.band,
                )
            )
    return SystemReport(baseline=baseline, candidate=candidate, rows=tuple(rows))


def _delta_cell(row: ReportRow) -> str:
    return format_1dp(row.delta) + ("*" if row.significant else "")


def render_report(report: SystemReport, format: str = "markdown") -> str:
    """Render a report deterministically as markdown, CSV, or JSON.

    Markdown shows the one-decimal delta with a significance asterisk, as
    in ``1.3*``.  CSV and JSON carry full-precision deltas so the rendered
    document reparses to exactly the report data.
    """
    if format == "markdown":
        return _render_markdown(report)
    if format == "csv":
        return _render_csv(report)
    if format == "json":
        return _render_json(report)
    raise ValueError(f"unknown report format {format!r}")


def _report_lps(report: SystemReport) -> list[LanguagePair]:
    lps: list[LanguagePair] = []
    for row in report.rows:
        if row.lp not in lps:
            lps.append(row.lp)
    return lps


def _report_metrics(report: SystemReport) -> list[MetricId]:
    present = {row.metric for row in report.rows}
    return [m for m in METRIC_COLUMN_ORDER if m in present]


def _render_markdown(report: SystemReport) -> str:
    lps = _report_lps(report)
    metrics = _report_metrics(report)
    lines = [
        f"Delta = {report.candidate} - {report.baseline} "
        "(asterisk: significant at 95% paired bootstrap)",
        "",
        "| pair | " + " | ".join(m.short_label for m in metrics) + " |",
        "| --- |" + " --- |" * len(metrics),
    ]
    for lp in lps:
        cells = [_delta_cell(report.cell(lp, m)) for m in metrics]
        lines.append(f"| {lp} | " + " | ".join(cells) + " |")
    band_rows = [r for r in report.rows if r.band is not None]
    if band_rows:
        lines.append("")
        lines.append("Human accuracy estimates:")
        for row in band_rows:
            lines.append(
                f"- {row.lp} {row.metric.short_label}: {row.accuracy:.1f}% ({row.band})"
            )
    return "\n".join(lines) + "\n"


_CSV_FIELDS = ["baseline", "candidate", "lp", "metric", "delta", "significant", "accuracy", "band"]


def _render_csv(report: SystemReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_FIELDS)
    for row in report.rows:
        writer.writerow(
            [
                report.baseline,
                report.candidate,
                str(row.lp),
                row.metric.value,
                repr(row.delta),
                "true" if row.significant else "false",
                "" if row.accuracy is None else repr(row.accuracy),
                "" if row.band is None else row.band,
            ]
        )
    return buf.getvalue()


def parse_report_csv(text: str) -> SystemReport:
    """Inverse of the CSV renderer; used to check render/reparse equality."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != _CSV_FIELDS:
        raise LuxkitError(f"unexpected report CSV header: {header!r}")
    rows = []
    baseline = candidate = ""
    for rec in reader:
        baseline, candidate = rec[0], rec[1]
        rows.append(
            ReportRow(
                lp=LanguagePair.parse(rec[2]),
                metric=MetricId.parse(rec[3]),
                delta=float(rec[4]),
                significant=rec[5] == "true",
                accuracy=float(rec[6]) if rec[6] else None,
                band=rec[7] or None,
            )
        )
    return SystemReport(baseline=baseline, candidate=candidate, rows=tuple(rows))


def _render_json(report: SystemReport) -> str:
    payload = {
        "baseline": report.baseline,
        "candidate": report.candidate,
        "rows": [
            {
                "lp": str(row.lp),
                "metric": row.metric.value,
                "delta": row.delta,
                "delta_display": _delta_cell(row),
                "significant": row.significant,
                "accuracy": row.accuracy,
                "band": row.band,
            }
            for row in report.rows
        ],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
