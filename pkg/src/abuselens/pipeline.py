"""End-to-end orchestration of the five pipeline stages.

A run is identified by a digest of its config and inputs; outputs are
written under output/<run-id>/ and never overwritten. Each stage records
its output file digests in the run manifest, so two runs over identical
inputs can be compared byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import aggregate as agg
from . import corpus as corpus_mod
from . import ngrams as ngrams_mod
from . import polarity as polarity_mod
from .classify import (DEFAULT_THRESHOLD, ModelBackendDescriptor,
                       classify_corpus)
from .corpus import Corpus, _atomic_write
from .normalize import NormalizationRules, SpamHeuristics, dedup, normalize, spam_filter
from .posts import RawPost

log = logging.getLogger(__name__)

STAGES = ("ingest", "normalize", "classify", "analyze", "export")


class ConfigError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    input_path: str
    output_dir: str
    corpus_name: str = "corpus"
    input_format: str = "jsonl"
    schema_map: dict = field(default_factory=dict)
    rules_path: str | None = None
    backend: dict = field(default_factory=lambda: {"kind": "keyword_rule"})
    threshold: float = DEFAULT_THRESHOLD
    weights_path: str | None = None
    lexicon_path: str | None = None
    stopwords_path: str | None = None
    cases_path: str | None = None
    stages: list[str] = field(default_factory=lambda: list(STAGES))
    seed: int = 0
    hinduphobic_only: bool = True
    min_tokens: int = 3
    near_duplicate_jaccard: float = 0.9
    figures: bool = True

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        with open(path, encoding="utf-8") as fh:
            return cls(**json.load(fh))

    def as_dict(self) -> dict:
        return {
            "input_path": self.input_path,
            "output_dir": self.output_dir,
            "corpus_name": self.corpus_name,
            "input_format": self.input_format,
            "schema_map": self.schema_map,
            "rules_path": self.rules_path,
            "backend": self.backend,
            "threshold": self.threshold,
            "weights_path": self.weights_path,
            "lexicon_path": self.lexicon_path,
            "stopwords_path": self.stopwords_path,
            "cases_path": self.cases_path,
            "stages": self.stages,
            "seed": self.seed,
            "hinduphobic_only": self.hinduphobic_only,
            "min_tokens": self.min_tokens,
            "near_duplicate_jaccard": self.near_duplicate_jaccard,
            "figures": self.figures,
        }

    def validate(self) -> None:
        if list(self.stages) != list(STAGES[: len(self.stages)]):
            raise ConfigError(
                f"stages must be a prefix of {list(STAGES)}, got {self.stages}"
            )
        if not self.stages:
            raise ConfigError("at least one stage required")
        if not Path(self.input_path).exists():
            raise ConfigError(f"input file does not exist: {self.input_path}")
        for label, p in (("rules", self.rules_path),
                         ("weights", self.weights_path),
                         ("lexicon", self.lexicon_path),
                         ("stopwords", self.stopwords_path),
                         ("cases", self.cases_path),
                         ("backend path", self.backend.get("path"))):
            if p and not Path(p).exists():
                raise ConfigError(f"{label} file does not exist: {p}")


def _file_digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _digest_tree(root: Path) -> dict[str, str]:
    """Digests for all data outputs under root (figures listed elsewhere)."""
    out = {}
    for path in sorted(root.rglob("*")):
        if path.is_file() and path.suffix in (".csv", ".json", ".jsonl"):
            out[str(path.relative_to(root))] = _file_digest(path)
    return out


def compute_run_id(config: PipelineConfig) -> str:
    h = hashlib.sha256()
    payload = dict(config.as_dict())
    payload.pop("output_dir", None)  # same inputs => same id, wherever written
    h.update(json.dumps(payload, sort_keys=True).encode("utf-8"))
    h.update(_file_digest(Path(config.input_path)).encode("ascii"))
    return h.hexdigest()[:12]


def run(config: PipelineConfig) -> dict:
    """Execute the configured stage prefix; returns the run manifest."""
    config.validate()
    run_id = compute_run_id(config)
    base = Path(config.output_dir)
    run_dir = base / run_id
    suffix = 1
    while run_dir.exists():  # runs are immutable; never overwrite
        suffix += 1
        run_dir = base / f"{run_id}-{suffix}"
    run_dir.mkdir(parents=True)

    manifest = {
        "run_id": run_id,
        "run_dir": str(run_dir),
        "config": config.as_dict(),
        "input_digest": _file_digest(Path(config.input_path)),
        "stages": {},
    }

    state: dict = {}
    for stage in config.stages:
        start = time.perf_counter()
        stage_dir = run_dir / stage
        try:
            _STAGE_FUNCS[stage](config, stage_dir, state)
        except Exception as exc:
            manifest["failed_stage"] = stage
            _write_manifest(run_dir, manifest)
            raise StageError(stage, exc) from exc
        manifest["stages"][stage] = {
            "outputs": _digest_tree(stage_dir),
            "seconds": round(time.perf_counter() - start, 3),
        }
        _write_manifest(run_dir, manifest)
    return manifest


def _write_manifest(run_dir: Path, manifest: dict) -> None:
    _atomic_write(run_dir / "run.json",
                  [json.dumps(manifest, indent=2, sort_keys=True) + "\n"])


def _stage_ingest(config: PipelineConfig, stage_dir: Path, state: dict) -> None:
    corpus = corpus_mod.ingest(
        config.input_path, stage_dir, config.corpus_name,
        fmt=config.input_format,
        schema_map=config.schema_map or None,
    )
    state["raw_corpus"] = corpus


def _stage_normalize(config: PipelineConfig, stage_dir: Path, state: dict) -> None:
    raw: Corpus = state["raw_corpus"]
    rules = (NormalizationRules.from_file(config.rules_path)
             if config.rules_path else NormalizationRules.default())
    normalized = []
    for rec in raw.iter_records():
        post = normalize(RawPost(
            id=rec["id"], text=rec["text"], timestamp=rec["timestamp"],
            country=rec["country"], language_hint=rec.get("language_hint"),
        ), rules)
        normalized.append(post)
    deduped, removed = dedup(normalized)
    heuristics = SpamHeuristics(
        min_tokens=config.min_tokens,
        near_duplicate_jaccard=config.near_duplicate_jaccard,
    )
    kept, discarded = spam_filter(deduped, heuristics)
    corpus = corpus_mod.write_corpus(
        stage_dir, config.corpus_name,
        (p.to_record() for p in kept),
        source=config.input_path,
    )
    summary = {
        "input": len(normalized),
        "duplicates_removed": removed,
        "spam_discarded": len(discarded),
        "spam_reasons": {},
        "kept": len(kept),
    }
    for _, reason in discarded:
        summary["spam_reasons"][reason] = summary["spam_reasons"].get(reason, 0) + 1
    _atomic_write(stage_dir / "normalize_summary.json",
                  [json.dumps(summary, indent=2, sort_keys=True) + "\n"])
    state["normalized_corpus"] = corpus


def _stage_classify(config: PipelineConfig, stage_dir: Path, state: dict) -> None:
    corpus: Corpus = state["normalized_corpus"]
    backend = ModelBackendDescriptor.from_dict(config.backend).load()
    summary = classify_corpus(corpus, backend, threshold=config.threshold)
    stage_dir.mkdir(parents=True, exist_ok=True)
    # timing varies run to run; keep the digested summary deterministic
    stable = {k: v for k, v in summary.items()
              if k not in ("seconds", "throughput_per_s")}
    _atomic_write(stage_dir / "classify_summary.json",
                  [json.dumps(stable, indent=2, sort_keys=True) + "\n"])
    state["backend"] = backend


def _stage_analyze(config: PipelineConfig, stage_dir: Path, state: dict) -> None:
    corpus: Corpus = state["normalized_corpus"]
    scored = agg.join_scored_posts(corpus, threshold=config.threshold)
    posts = agg.filter_hinduphobic(scored, enabled=config.hinduphobic_only)
    stage_dir.mkdir(parents=True, exist_ok=True)

    counts = agg.monthly_counts(posts)
    agg.export_monthly_counts(counts, stage_dir / "fig5_counts.csv")

    if posts:
        dist = agg.label_count_distribution(posts)
        agg.export_label_distribution(dist, stage_dir / "fig10_label_dist.csv")

    totals = agg.sentiment_totals(posts)
    agg.export_sentiment_totals(totals, stage_dir / "fig12_sentiment_totals.csv")
    shares = agg.sentiment_totals(posts, exclude={"official_report"})
    with open(stage_dir / "country_sentiment_percentages.json", "w",
              encoding="utf-8") as fh:
        json.dump(shares["country_percentages"], fh, indent=2, sort_keys=True)

    matrices = agg.cooccurrence_by_year(posts)
    agg.export_cooccurrence(matrices, stage_dir / "fig13_cooccurrence.csv")

    stopwords = (ngrams_mod.load_stopwords(config.stopwords_path)
                 if config.stopwords_path else ngrams_mod.default_stopwords())
    filter_tag = "hinduphobic_only" if config.hinduphobic_only else "all"
    tables = []
    for n in (2, 3):
        tables.append(ngrams_mod.count_ngrams(
            (p.tokens for p in posts), n, stopwords, "global", filter_tag))
        for country in sorted({p.country for p in posts}):
            tables.append(ngrams_mod.count_ngrams(
                (p.tokens for p in posts if p.country == country),
                n, stopwords, country, filter_tag))
    ngrams_mod.export_tables(tables, stage_dir / "ngrams.csv",
                             stage_dir / "ngrams_topk.json")

    lexicon = (polarity_mod.PolarityLexicon.from_file(config.lexicon_path)
               if config.lexicon_path else polarity_mod.PolarityLexicon.default())
    weights = (polarity_mod.SentimentWeights.from_file(config.weights_path)
               if config.weights_path else polarity_mod.SentimentWeights())
    hist_rows = []
    by_method = {}
    for method in (polarity_mod.METHOD_LEXICON, polarity_mod.METHOD_CUSTOM):
        triples = []
        for p in posts:
            if method == polarity_mod.METHOD_LEXICON:
                score = polarity_mod.lexicon_polarity(p, lexicon)
            else:
                score = polarity_mod.custom_polarity(p.active, weights)
            triples.append((p.country, p.month, score.value))
            hist_rows.append((method, score.value))
        by_method[method] = polarity_mod.monthly_mean_polarity(triples, method)
    agg.export_polarity_series(by_method, stage_dir / "fig15_polarity.csv")
    with open(stage_dir / "fig14_polarity_hist.csv", "w", encoding="utf-8") as fh:
        fh.write("method,value\n")
        for method, value in hist_rows:
            fh.write(f"{method},{value:.6f}\n")

    if config.cases_path:
        cases = corpus_mod.load_cases(config.cases_path, fill_zero=True)
        agg.export_cases(cases, stage_dir / "fig4_cases.csv")
        correlations = {}
        for country, series in counts.items():
            if country in cases:
                try:
                    correlations[country] = agg.correlate_with_cases(
                        series, cases[country])
                except agg.AggregationError as exc:
                    correlations[country] = {"error": str(exc)}
        with open(stage_dir / "correlation.json", "w", encoding="utf-8") as fh:
            json.dump(correlations, fh, indent=2, sort_keys=True)

    if config.figures:
        from . import report
        report.render_figures(stage_dir, stage_dir / "figures")

    state["analyze_dir"] = stage_dir


def _stage_export(config: PipelineConfig, stage_dir: Path, state: dict) -> None:
    corpus: Corpus = state["normalized_corpus"]
    stage_dir.mkdir(parents=True, exist_ok=True)
    corpus.export(stage_dir / "corpus.jsonl")
    from .classify import iter_predictions
    _atomic_write(
        stage_dir / "predictions.jsonl",
        (json.dumps(rec, sort_keys=True) + "\n" for rec in iter_predictions(corpus)),
    )


_STAGE_FUNCS = {
    "ingest": _stage_ingest,
    "normalize": _stage_normalize,
    "classify": _stage_classify,
    "analyze": _stage_analyze,
    "export": _stage_export,
}
