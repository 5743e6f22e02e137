"""Render figures from the analytics stage's delimited outputs.

This is the only module that draws images. It consumes the per-figure CSV
files written by the analyze stage, so any other plotting tool can consume
the same data. Missing inputs are skipped, not fatal.
"""

from __future__ import annotations

import csv
import json
import logging
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .labels import SENWAVE_LABELS  # noqa: E402

log = logging.getLogger(__name__)


def _read_csv(path: Path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def _save(fig, out_dir: Path, name: str, written: list[str]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / name
    fig.savefig(target, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(str(target))


def _plot_monthly_counts(rows: list[dict], out_dir: Path, written: list[str]) -> None:
    by_country = defaultdict(list)
    for row in rows:
        count = int(row["count"]) if row["count"] != "" else 0
        by_country[row["country"]].append((row["month"], count))
    fig, ax = plt.subplots(figsize=(10, 5))
    for country, points in sorted(by_country.items()):
        months = [m for m, _ in points]
        ax.plot(months, [c for _, c in points], marker="o", label=country)
    ax.set_xlabel("month")
    ax.set_ylabel("posts")
    ax.set_title("Monthly flagged-post counts by country")
    ax.legend(fontsize=8)
    ax.tick_params(axis="x", rotation=60, labelsize=7)
    _save(fig, out_dir, "monthly_counts.png", written)


def _plot_label_distribution(rows: list[dict], out_dir: Path, written: list[str]) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar([r["labels"] for r in rows], [float(r["percentage"]) for r in rows])
    ax.set_xlabel("active sentiment labels per post")
    ax.set_ylabel("% of posts")
    ax.set_title("Label-count distribution")
    _save(fig, out_dir, "label_distribution.png", written)


def _plot_sentiment_totals(rows: list[dict], out_dir: Path, written: list[str]) -> None:
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar([r["sentiment"] for r in rows], [int(r["count"]) for r in rows])
    ax.set_ylabel("posts with label active")
    ax.set_title("Sentiment totals")
    ax.tick_params(axis="x", rotation=45, labelsize=8)
    _save(fig, out_dir, "sentiment_totals.png", written)


def _plot_cooccurrence(rows: list[dict], out_dir: Path, written: list[str]) -> None:
    periods = sorted({r["period"] for r in rows})
    idx = {lbl: i for i, lbl in enumerate(SENWAVE_LABELS)}
    for period in periods:
        matrix = [[0] * len(SENWAVE_LABELS) for _ in SENWAVE_LABELS]
        for r in rows:
            if r["period"] == period:
                matrix[idx[r["label_a"]]][idx[r["label_b"]]] = int(r["count"])
        fig, ax = plt.subplots(figsize=(7, 6))
        im = ax.imshow(matrix, cmap="viridis")
        ax.set_xticks(range(len(SENWAVE_LABELS)), SENWAVE_LABELS,
                      rotation=60, ha="right", fontsize=7)
        ax.set_yticks(range(len(SENWAVE_LABELS)), SENWAVE_LABELS, fontsize=7)
        ax.set_title(f"Sentiment co-occurrence ({period})")
        fig.colorbar(im, ax=ax, shrink=0.8)
        _save(fig, out_dir, f"cooccurrence_{period}.png", written)


def _plot_polarity_hist(rows: list[dict], out_dir: Path, written: list[str]) -> None:
    by_method = defaultdict(list)
    for r in rows:
        by_method[r["method"]].append(float(r["value"]))
    fig, axes = plt.subplots(1, max(len(by_method), 1), figsize=(10, 4), squeeze=False)
    for ax, (method, values) in zip(axes[0], sorted(by_method.items())):
        ax.hist(values, bins=40, range=(-1.0, 1.0))
        ax.set_title(f"Polarity ({method})")
        ax.set_xlabel("polarity")
    _save(fig, out_dir, "polarity_histogram.png", written)


def _plot_polarity_series(rows: list[dict], out_dir: Path, written: list[str]) -> None:
    series = defaultdict(list)
    for r in rows:
        if r["mean_polarity"] != "":
            series[(r["method"], r["country"])].append(
                (r["month"], float(r["mean_polarity"])))
    fig, ax = plt.subplots(figsize=(10, 5))
    for (method, country), points in sorted(series.items()):
        ax.plot([m for m, _ in points], [v for _, v in points],
                marker=".", label=f"{country} ({method})")
    ax.set_ylabel("mean polarity")
    ax.set_title("Monthly mean polarity")
    ax.legend(fontsize=7)
    ax.tick_params(axis="x", rotation=60, labelsize=7)
    _save(fig, out_dir, "polarity_series.png", written)


def _plot_cases(rows: list[dict], out_dir: Path, written: list[str]) -> None:
    by_country = defaultdict(list)
    for r in rows:
        by_country[r["country"]].append((r["month"], int(r["cases"])))
    fig, ax = plt.subplots(figsize=(10, 5))
    for country, points in sorted(by_country.items()):
        ax.plot([m for m, _ in points], [c for _, c in points],
                marker="o", label=country)
    ax.set_ylabel("cases")
    ax.set_title("Monthly case counts")
    ax.legend(fontsize=8)
    ax.tick_params(axis="x", rotation=60, labelsize=7)
    _save(fig, out_dir, "case_counts.png", written)


def _plot_top_ngrams(payload: list[dict], out_dir: Path, written: list[str]) -> None:
    for entry in payload:
        if entry["scope"] != "global" or not entry["top"]:
            continue
        grams = [t["ngram"] for t in entry["top"]][::-1]
        counts = [t["count"] for t in entry["top"]][::-1]
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.barh(grams, counts)
        ax.set_xlabel("count")
        kind = "bigrams" if entry["n"] == 2 else "trigrams"
        ax.set_title(f"Top {kind} ({entry['filter']})")
        _save(fig, out_dir, f"top_{kind}.png", written)


_RENDERERS = [
    ("fig5_counts.csv", _plot_monthly_counts),
    ("fig10_label_dist.csv", _plot_label_distribution),
    ("fig12_sentiment_totals.csv", _plot_sentiment_totals),
    ("fig13_cooccurrence.csv", _plot_cooccurrence),
    ("fig14_polarity_hist.csv", _plot_polarity_hist),
    ("fig15_polarity.csv", _plot_polarity_series),
    ("fig4_cases.csv", _plot_cases),
]


def render_figures(analyze_dir, out_dir) -> list[str]:
    """Render every available figure; returns the written image paths."""
    analyze_dir = Path(analyze_dir)
    out_dir = Path(out_dir)
    written: list[str] = []
    for filename, renderer in _RENDERERS:
        path = analyze_dir / filename
        if not path.exists():
            log.info("skipping %s: not present", filename)
            continue
        rows = _read_csv(path)
        if rows:
            renderer(rows, out_dir, written)
    topk_path = analyze_dir / "ngrams_topk.json"
    if topk_path.exists():
        with open(topk_path, encoding="utf-8") as fh:
            _plot_top_ngrams(json.load(fh), out_dir, written)
    return written
