"""Toolkit configuration: a TOML file overlaying built-in defaults.

The file location comes from an explicit path, the LUXKIT_CONFIG
environment variable, or nothing (pure defaults).  Sections:

    [embedding]   kind = "mock_deterministic" | "precomputed_file" | "subprocess_protocol"
                  dims, seed            (mock)
                  path                  (precomputed_file)
                  command = ["..."]     (subprocess_protocol)
    [quotes]      default_double, default_single, plus per-language
                  [quotes.targets.<lang>] double/single overrides
    [pipeline]    min_source_words, top_k, default_threshold
    [bootstrap]   replicates, confidence, seed
    [qe]          lo, hi
    [accuracy.<metric>]  anchors = [[delta, accuracy], ...]
    [accuracy]    unmapped = ["ter", "luxembedder_qe"]
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .corpus import MetricId
from .embedding import (
    MOCK_DEFAULT_DIMS,
    MOCK_DEFAULT_SEED,
    MockHashProvider,
    PrecomputedFileProvider,
    SubprocessProvider,
)
from .errors import ConfigError
from .gateway import QeNormalization
from .preprocess import QuoteMode, QuotePolicy
from .report import AccuracyBandTable, DEFAULT_ACCURACY_TABLE
from .stats import BootstrapConfig

ENV_CONFIG_VAR = "LUXKIT_CONFIG"


@dataclass(frozen=True)
class EmbeddingConfig:
    kind: str = "mock_deterministic"
    dims: int = MOCK_DEFAULT_DIMS
    seed: int = MOCK_DEFAULT_SEED
    path: Optional[str] = None
    command: tuple[str, ...] = ()


@dataclass(frozen=True)
class PipelineConfig:
    min_source_words: int = 5
    top_k: int = 500
    default_threshold: float = 0.98


@dataclass(frozen=True)
class ToolkitConfig:
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    quotes: QuotePolicy = field(default_factory=QuotePolicy)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    bootstrap: BootstrapConfig = field(default_factory=BootstrapConfig)
    qe: QeNormalization = field(default_factory=QeNormalization)
    accuracy: AccuracyBandTable = DEFAULT_ACCURACY_TABLE


def load_config(path: Optional[Union[str, Path]] = None) -> ToolkitConfig:
    """Load the toolkit configuration, falling back to defaults."""
    if path is None:
        env = os.environ.get(ENV_CONFIG_VAR)
        if env:
            path = env
    if path is None:
        return ToolkitConfig()
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return _config_from_dict(raw, path)


def _config_from_dict(raw: dict, path: Path) -> ToolkitConfig:
    try:
        emb = raw.get("embedding", {})
        embedding = EmbeddingConfig(
            kind=emb.get("kind", "mock_deterministic"),
            dims=int(emb.get("dims", MOCK_DEFAULT_DIMS)),
            seed=int(emb.get("seed", MOCK_DEFAULT_SEED)),
            path=emb.get("path"),
            command=tuple(emb.get("command", ())),
        )
        q = raw.get("quotes", {})
        targets = {
            lang: (t["double"], t["single"]) for lang, t in q.get("targets", {}).items()
        }
        quotes = QuotePolicy(
            mode=QuoteMode(q.get("mode", "standardize")),
            targets=targets,
            default_targets=(q.get("default_double", '"'), q.get("default_single", "'")),
        )
        p = raw.get("pipeline", {})
        pipeline = PipelineConfig(
            min_source_words=int(p.get("min_source_words", 5)),
            top_k=int(p.get("top_k", 500)),
            default_threshold=float(p.get("default_threshold", 0.98)),
        )
        b = raw.get("bootstrap", {})
        bootstrap = BootstrapConfig(
            replicates=int(b.get("replicates", 1000)),
            confidence=float(b.get("confidence", 0.95)),
            seed=int(b.get("seed", 0)),
        )
        qe_raw = raw.get("qe", {})
        qe = QeNormalization(lo=float(qe_raw.get("lo", 80.0)), hi=float(qe_raw.get("hi", 100.0)))
        acc_raw = raw.get("accuracy", {})
        if acc_raw:
            unmapped = frozenset(
                MetricId.parse(m)
                for m in acc_raw.get("unmapped", ["ter", "luxembedder_qe"])
            )
            anchors = {}
            for metric_name, section in acc_raw.items():
                if metric_name == "unmapped":
                    continue
                metric = MetricId.parse(metric_name)
                anchors[metric] = tuple((float(d), float(a)) for d, a in section["anchors"])
            accuracy = AccuracyBandTable(anchors=anchors, unmapped=unmapped)
        else:
            accuracy = DEFAULT_ACCURACY_TABLE
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad configuration in {path}: {exc}") from exc
    return ToolkitConfig(
        embedding=embedding,
        quotes=quotes,
        pipeline=pipeline,
        bootstrap=bootstrap,
        qe=qe,
        accuracy=accuracy,
    )


def make_provider(config: EmbeddingConfig):
    """Instantiate the configured embedding provider."""
    if config.kind == "mock_deterministic":
        return MockHashProvider(dims=config.dims, seed=config.seed)
    if config.kind == "precomputed_file":
        if not config.path:
            raise ConfigError("precomputed_file provider needs a path")
        return PrecomputedFileProvider(config.path)
    if config.kind == "subprocess_protocol":
        if not config.command:
            raise ConfigError("subprocess_protocol provider needs a command")
        return SubprocessProvider(config.command)
    raise ConfigError(f"unknown embedding provider kind: {config.kind!r}")
