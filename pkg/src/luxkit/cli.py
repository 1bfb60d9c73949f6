"""Command-line surface.

Subcommands compose the library operations:

    build-benchmark   raw documents -> aligned, filtered, top-k benchmark
    filter            threshold / min-length filtering of a corpus file
    mixture           instruction-tuning dataset from corpus+threshold sources
    score             corpus-level metric score for one system
    compare           paired-bootstrap delta between two systems
    correlate         QE-vs-metric correlation table from a score fixture
    report            render a delta report (markdown / csv / json)

Exit codes: 0 success, 1 domain error, 2 usage error.  Every command that
uses randomness takes --seed.  A TOML config file may be given with
--config or the LUXKIT_CONFIG environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import metrics as metrics_mod
from .align import (
    DEFAULT_PROMPT_TEMPLATE,
    PromptTemplate,
    build_benchmark,
    build_training_mixture,
    filter_by_threshold,
    save_mixture,
)
from .config import ToolkitConfig, load_config, make_provider
from .corpus import (
    CorpusStage,
    LanguagePair,
    MetricId,
    METRIC_COLUMN_ORDER,
    load_corpus,
    load_score_fixture,
    save_corpus,
)
from .errors import LuxkitError
from .gateway import EvalSegment, PrecomputedScoreAdapter, SubprocessScorerAdapter, external_score, qe_luxembedder, system_score
from .preprocess import filter_min_source_length, strip_quotes
from .report import build_report, render_report
from .stats import BootstrapConfig, paired_bootstrap, system_correlation_matrix


def _read_lines(path: str) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _read_texts(path: str, field: str) -> list[str]:
    """Segment texts from a plain text file (one per line) or a corpus
    JSONL file, where ``field`` picks the record side ("src" or "tgt")."""
    if not path.endswith(".jsonl"):
        return _read_lines(path)
    texts = []
    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line:
            continue
        try:
            record = json.loads(line)
            texts.append(str(record[field]))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise LuxkitError(f"{path}:{lineno}: cannot read {field!r} field: {exc}") from exc
    return texts


def _corpus_format(path: str, explicit: Optional[str]) -> str:
    if explicit:
        return explicit
    return "tsv" if path.endswith(".tsv") else "jsonl"


def _add_config_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="TOML config file (or set LUXKIT_CONFIG)")


def _load_cfg(args) -> ToolkitConfig:
    return load_config(getattr(args, "config", None))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="luxkit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-benchmark", help="build a benchmark from raw documents")
    p.add_argument("--source-file", action="append", required=True, help="source-language document (repeatable)")
    p.add_argument("--target-file", action="append", required=True, help="target-language document (repeatable)")
    p.add_argument("--lp", required=True, help="language pair, e.g. lb-fr")
    p.add_argument("--k", type=int, default=None, help="benchmark size (default from config)")
    p.add_argument("--min-words", type=int, default=None)
    p.add_argument("--out", required=True, help="output corpus (jsonl)")
    p.add_argument("--review-out", help="human-review TSV")
    _add_config_arg(p)

    p = sub.add_parser("filter", help="filter a corpus by similarity and/or source length")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lp", help="language pair when the file does not carry one")
    p.add_argument("--min-sim", type=float, help="similarity threshold (inclusive)")
    p.add_argument("--min-words", type=int, help="minimum source word count")
    p.add_argument("--format", choices=["jsonl", "tsv"], help="input/output format (default by suffix)")
    _add_config_arg(p)

    p = sub.add_parser("mixture", help="build an instruction-tuning mixture")
    p.add_argument(
        "--source",
        action="append",
        required=True,
        metavar="CORPUS:THRESHOLD",
        help="corpus file and similarity threshold, e.g. data.jsonl:0.99 (repeatable)",
    )
    p.add_argument("--template", default=DEFAULT_PROMPT_TEMPLATE)
    p.add_argument("--target-lang", action="append", help="restrict to these target languages")
    p.add_argument("--out", required=True)
    p.add_argument("--manifest")
    p.add_argument("--seed", type=int, default=0)
    _add_config_arg(p)

    p = sub.add_parser("score", help="score one system on one metric")
    p.add_argument("--metric", required=True)
    p.add_argument("--hyp", required=True, help="hypotheses, one per line")
    p.add_argument("--ref", help="references, one per line")
    p.add_argument("--src", help="sources, one per line (QE and xcomet)")
    p.add_argument("--scores-file", help="precomputed neural scores TSV (segment_id<TAB>score)")
    p.add_argument("--scorer-cmd", nargs="+", help="NDJSON scorer command for neural metrics")
    p.add_argument("--strip-quotes", action="store_true", help="remove all quotation marks before scoring")
    p.add_argument("--per-segment", action="store_true", help="also print per-segment scores")
    _add_config_arg(p)

    p = sub.add_parser("compare", help="paired-bootstrap significance of candidate vs baseline")
    p.add_argument("--baseline", required=True, help="baseline hypotheses, one per line")
    p.add_argument("--candidate", required=True, help="candidate hypotheses, one per line")
    p.add_argument("--ref", help="shared references, one per line")
    p.add_argument("--src", help="shared sources (QE)")
    p.add_argument("--metric", required=True)
    p.add_argument("--strip-quotes", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--replicates", "-B", type=int, default=None)
    p.add_argument("--confidence", type=float, default=None)
    _add_config_arg(p)

    p = sub.add_parser("correlate", help="QE-vs-metric correlations over a score fixture")
    p.add_argument("--fixture", required=True, help="TSV fixture: system, lp, metric, score")
    p.add_argument("--lp", required=True)
    p.add_argument("--format", choices=["markdown", "tsv"], default="markdown")
    _add_config_arg(p)

    p = sub.add_parser("report", help="render a delta report")
    p.add_argument("--baseline-scores", required=True, help="TSV: lp, metric, score")
    p.add_argument("--candidate-scores", required=True, help="TSV: lp, metric, score")
    p.add_argument("--significance", help="TSV: lp, metric, significant (true/false)")
    p.add_argument("--baseline-name", default="baseline")
    p.add_argument("--candidate-name", default="candidate")
    p.add_argument("--format", choices=["markdown", "csv", "json"], default="markdown")
    _add_config_arg(p)

    return parser


def _cmd_build_benchmark(args) -> int:
    cfg = _load_cfg(args)
    provider = make_provider(cfg.embedding)
    result = build_benchmark(
        [Path(f).read_text(encoding="utf-8") for f in args.source_file],
        [Path(f).read_text(encoding="utf-8") for f in args.target_file],
        args.lp,
        provider,
        k=args.k if args.k is not None else cfg.pipeline.top_k,
        min_words=args.min_words if args.min_words is not None else cfg.pipeline.min_source_words,
        quote_policy=cfg.quotes,
        review_path=args.review_out,
    )
    save_corpus(result.corpus, args.out, "jsonl")
    print(f"benchmark: {len(result.corpus)} pairs -> {args.out}")
    return 0


def _cmd_filter(args) -> int:
    fmt = _corpus_format(args.infile, args.format)
    corpus = load_corpus(args.infile, fmt, lp=args.lp)
    if args.min_sim is None and args.min_words is None:
        raise LuxkitError("nothing to filter: pass --min-sim and/or --min-words")
    if args.min_words is not None:
        corpus = filter_min_source_length(corpus, args.min_words)
    if args.min_sim is not None:
        kept = filter_by_threshold(corpus.pairs, args.min_sim)
        corpus = corpus.with_pairs(kept, CorpusStage.FILTERED)
    out_fmt = _corpus_format(args.out, args.format)
    save_corpus(corpus, args.out, out_fmt)
    print(f"kept {len(corpus)} pairs -> {args.out}")
    return 0


def _cmd_mixture(args) -> int:
    sources = []
    names = []
    for spec in args.source:
        try:
            path, theta_text = spec.rsplit(":", 1)
            theta = float(theta_text)
        except ValueError:
            raise LuxkitError(f"bad --source {spec!r}; expected CORPUS:THRESHOLD") from None
        corpus = load_corpus(path, _corpus_format(path, None))
        sources.append((corpus, theta))
        names.append(Path(path).name)
    result = build_training_mixture(
        sources,
        PromptTemplate(args.template),
        target_langs=args.target_lang,
        seed=args.seed,
        source_names=names,
    )
    save_mixture(result, args.out, args.manifest)
    print(f"mixture: {result.manifest['total']} records -> {args.out}")
    return 0


def _texts_for_scoring(args, which: str) -> Optional[list[str]]:
    path = getattr(args, which, None)
    if path is None:
        return None
    lines = _read_texts(path, "src" if which == "src" else "tgt")
    if args.strip_quotes:
        lines = [strip_quotes(t) for t in lines]
    return lines


def _surface_score(metric: MetricId, hyps: list[str], refs: list[str]):
    return metrics_mod.SURFACE_METRICS[metric](hyps, refs)


def _cmd_score(args) -> int:
    cfg = _load_cfg(args)
    metric = MetricId.parse(args.metric)
    hyps = _texts_for_scoring(args, "hyp")
    refs = _texts_for_scoring(args, "ref")
    srcs = _texts_for_scoring(args, "src")

    if metric in metrics_mod.SURFACE_METRICS:
        if refs is None:
            raise LuxkitError(f"{metric.value} needs --ref")
        score = _surface_score(metric, hyps, refs)
        print(f"{metric.value}\t{score.value:.4f}\t(n={score.n_segments})")
        return 0

    if metric is MetricId.LUXEMBEDDER_QE and not args.scores_file and not args.scorer_cmd:
        if srcs is None:
            raise LuxkitError("luxembedder_qe needs --src")
        provider = make_provider(cfg.embedding)
        scores = qe_luxembedder(srcs, hyps, provider, cfg.qe)
    else:
        segments = [
            EvalSegment(
                id=str(i),
                hypothesis=h,
                source=srcs[i] if srcs else None,
                reference=refs[i] if refs else None,
            )
            for i, h in enumerate(hyps)
        ]
        if args.scores_file:
            adapter = PrecomputedScoreAdapter(args.scores_file, metric)
        elif args.scorer_cmd:
            adapter = SubprocessScorerAdapter(args.scorer_cmd, metric)
        else:
            raise LuxkitError(f"{metric.value} needs --scores-file or --scorer-cmd")
        scores = external_score(segments, adapter)
    value = system_score(scores)
    print(f"{metric.value}\t{value:.4f}\t(n={len(scores.values)})")
    if args.per_segment:
        for i, v in enumerate(scores.values):
            print(f"{i}\t{v:.6f}")
    return 0


def _cmd_compare(args) -> int:
    cfg = _load_cfg(args)
    metric = MetricId.parse(args.metric)
    base_hyps = _texts_for_scoring(args, "baseline")
    cand_hyps = _texts_for_scoring(args, "candidate")
    refs = _texts_for_scoring(args, "ref")
    srcs = _texts_for_scoring(args, "src")

    boot = BootstrapConfig(
        replicates=args.replicates if args.replicates is not None else cfg.bootstrap.replicates,
        confidence=args.confidence if args.confidence is not None else cfg.bootstrap.confidence,
        seed=args.seed if args.seed is not None else cfg.bootstrap.seed,
    )

    if metric is MetricId.BLEU:
        if refs is None:
            raise LuxkitError("bleu needs --ref")
        base = metrics_mod.bleu_sufficient_stats(base_hyps, refs)
        cand = metrics_mod.bleu_sufficient_stats(cand_hyps, refs)
    elif metric is MetricId.TER:
        if refs is None:
            raise LuxkitError("ter needs --ref")
        base = metrics_mod.ter_sufficient_stats(base_hyps, refs)
        cand = metrics_mod.ter_sufficient_stats(cand_hyps, refs)
    elif metric is MetricId.CHRF2:
        if refs is None:
            raise LuxkitError("chrf2 needs --ref")
        base = metrics_mod.chrf2_segment_scores(base_hyps, refs)
        cand = metrics_mod.chrf2_segment_scores(cand_hyps, refs)
    elif metric is MetricId.LUXEMBEDDER_QE:
        if srcs is None:
            raise LuxkitError("luxembedder_qe needs --src")
        provider = make_provider(cfg.embedding)
        base = list(qe_luxembedder(srcs, base_hyps, provider, cfg.qe).values)
        cand = list(qe_luxembedder(srcs, cand_hyps, provider, cfg.qe).values)
    else:
        raise LuxkitError(
            f"compare supports surface metrics and luxembedder_qe; for {metric.value} "
            "score both systems with a scorer and compare the score files"
        )

    result = paired_bootstrap(base, cand, boot)
    payload = {
        "metric": metric.value,
        "delta": result.delta,
        "ci_lo": result.ci_lo,
        "ci_hi": result.ci_hi,
        "significant": result.significant,
        "replicates": boot.replicates,
        "confidence": boot.confidence,
        "seed": boot.seed,
        "n_segments": len(base_hyps),
    }
    print(json.dumps(payload, ensure_ascii=False))
    return 0


def _cmd_correlate(args) -> int:
    records = load_score_fixture(args.fixture)
    matrix = system_correlation_matrix(records, args.lp)
    if args.format == "tsv":
        print("metric\trho\ttau\tp_rho\tp_tau")
        for metric, res in matrix.items():
            print(f"{metric.value}\t{res.rho:.4f}\t{res.tau:.4f}\t{res.p_rho:.5f}\t{res.p_tau:.5f}")
    else:
        print(f"QE correlations for {args.lp}")
        print("")
        print("| metric | rho | tau | p(rho) | p(tau) |")
        print("| --- | --- | --- | --- | --- |")
        for metric, res in matrix.items():
            print(
                f"| {metric.short_label} | {res.rho:.4f} | {res.tau:.4f} "
                f"| {res.p_rho:.5f} | {res.p_tau:.5f} |"
            )
    return 0


def _read_score_table(path: str) -> dict[tuple[str, MetricId], float]:
    table = {}
    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line or line.startswith("#") or line.startswith("lp\t"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise LuxkitError(f"{path}:{lineno}: expected 'lp<TAB>metric<TAB>score'")
        table[(str(LanguagePair.parse(cols[0])), MetricId.parse(cols[1]))] = float(cols[2])
    return table


def _read_sig_table(path: str) -> dict[tuple[str, MetricId], bool]:
    table = {}
    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line or line.startswith("#") or line.startswith("lp\t"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise LuxkitError(f"{path}:{lineno}: expected 'lp<TAB>metric<TAB>true|false'")
        table[(str(LanguagePair.parse(cols[0])), MetricId.parse(cols[1]))] = (
            cols[2].strip().lower() == "true"
        )
    return table


def _cmd_report(args) -> int:
    cfg = _load_cfg(args)
    baseline_scores = _read_score_table(args.baseline_scores)
    candidate_scores = _read_score_table(args.candidate_scores)
    significance = _read_sig_table(args.significance) if args.significance else {}
    lps: list[str] = []
    for lp, _metric in baseline_scores:
        if lp not in lps:
            lps.append(lp)
    metrics = [m for m in METRIC_COLUMN_ORDER if any(k[1] == m for k in baseline_scores)]
    report = build_report(
        args.baseline_name,
        args.candidate_name,
        baseline_scores,
        candidate_scores,
        significance,
        lps=lps,
        metrics=metrics,
        accuracy_table=cfg.accuracy,
    )
    sys.stdout.write(render_report(report, args.format))
    return 0


_COMMANDS = {
    "build-benchmark": _cmd_build_benchmark,
    "filter": _cmd_filter,
    "mixture": _cmd_mixture,
    "score": _cmd_score,
    "compare": _cmd_compare,
    "correlate": _cmd_correlate,
    "report": _cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (LuxkitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
