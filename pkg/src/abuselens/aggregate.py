"""Longitudinal and distributional analytics over classified posts.

Everything here consumes "scored posts" (post metadata joined with
predictions) and emits plot-ready data structures plus per-figure CSV files.
Image rendering lives in report.py, not here.
"""

from __future__ import annotations

import csv
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from .classify import DEFAULT_THRESHOLD
from .corpus import CaseSeries, Corpus
from .classify import iter_predictions
from .labels import HINDUPHOBIC, SENWAVE_LABELS
from .posts import iter_months, month_key

log = logging.getLogger(__name__)

ALL_COUNTRIES = "ALL"
UNKNOWN_COUNTRY = "??"


class AggregationError(ValueError):
    pass


@dataclass
class ScoredPost:
    id: str
    country: str
    month: str
    binary: str
    confidence: float
    scores: list[float]
    active: list[bool]
    tokens: list[str] = field(default_factory=list)

    @property
    def n_active(self) -> int:
        return sum(self.active)

    def active_labels(self) -> list[str]:
        return [lbl for lbl, on in zip(SENWAVE_LABELS, self.active) if on]


def join_scored_posts(corpus: Corpus, threshold: float = DEFAULT_THRESHOLD,
                      known_countries=None) -> list[ScoredPost]:
    """Join corpus records with their persisted predictions, in corpus order."""
    known = set(known_countries) if known_countries else None
    scored = []
    for rec, pred in zip(corpus.iter_records(), iter_predictions(corpus)):
        if rec["id"] != pred["id"]:
            raise AggregationError(
                f"prediction order mismatch: record {rec['id']} vs prediction {pred['id']}"
            )
        country = rec["country"]
        if known is not None and country not in known:
            log.warning("unknown country code %r; bucketing as %s", country, UNKNOWN_COUNTRY)
            country = UNKNOWN_COUNTRY
        scores = [float(s) for s in pred["sentiment_scores"]]
        scored.append(ScoredPost(
            id=rec["id"],
            country=country,
            month=month_key(rec["timestamp"]),
            binary=pred["binary"],
            confidence=float(pred["confidence"]),
            scores=scores,
            active=[s >= threshold for s in scores],
            tokens=list(rec.get("tokens", [])),
        ))
    return scored


def filter_hinduphobic(posts, enabled: bool = True):
    """Default analytics filter: abuse-flagged posts only."""
    if not enabled:
        return list(posts)
    return [p for p in posts if p.binary == HINDUPHOBIC]


@dataclass
class MonthlySeries:
    country: str
    months: list[str]
    values: list  # counts (int) or means (float); None marks an empty month
    kind: str = "count"
    n: list | None = None  # per-month sample sizes for mean series

    def total(self):
        return sum(v for v in self.values if v is not None)


def monthly_counts(posts) -> dict[str, MonthlySeries]:
    """Per-country and ALL monthly post counts over the observed month range."""
    posts = list(posts)
    if not posts:
        return {ALL_COUNTRIES: MonthlySeries(ALL_COUNTRIES, [], [], "count")}
    months = sorted({p.month for p in posts})
    full = list(iter_months(months[0], months[-1]))
    counts: dict[str, Counter] = defaultdict(Counter)
    for p in posts:
        counts[p.country][p.month] += 1
        counts[ALL_COUNTRIES][p.month] += 1
    result = {}
    for country in sorted(counts):
        by_month = counts[country]
        result[country] = MonthlySeries(
            country=country,
            months=full,
            values=[by_month.get(m, 0) for m in full],
            kind="count",
        )
    # conservation check: groupings must sum to the input count
    assert result[ALL_COUNTRIES].total() == len(posts)
    assert sum(s.total() for c, s in result.items() if c != ALL_COUNTRIES) == len(posts)
    return result


@dataclass
class LabelCountDistribution:
    buckets: dict[str, int]  # "0", "1", "2", "3+"
    percentages: dict[str, float]
    total: int


def label_count_distribution(posts) -> LabelCountDistribution:
    """Bucket posts by how many sentiment labels are active: 0, 1, 2, 3+."""
    posts = list(posts)
    if not posts:
        raise AggregationError("empty corpus")
    buckets = {"0": 0, "1": 0, "2": 0, "3+": 0}
    for p in posts:
        n = p.n_active
        key = str(n) if n < 3 else "3+"
        buckets[key] += 1
    total = len(posts)
    percentages = {k: 100.0 * v / total for k, v in buckets.items()}
    return LabelCountDistribution(buckets=buckets, percentages=percentages, total=total)


def sentiment_totals(posts, exclude=None) -> dict:
    """Per-label activation counts, plus per-country percentage shares.

    Excluded labels are omitted from the output and from the percentage base.
    """
    exclude = set(exclude or ())
    labels = [lbl for lbl in SENWAVE_LABELS if lbl not in exclude]
    counts = {lbl: 0 for lbl in labels}
    by_country: dict[str, Counter] = defaultdict(Counter)
    for p in posts:
        for lbl in p.active_labels():
            if lbl in exclude:
                continue
            counts[lbl] += 1
            by_country[p.country][lbl] += 1
    country_pct = {}
    for country, c in sorted(by_country.items()):
        base = sum(c.values())
        country_pct[country] = {
            lbl: (100.0 * c[lbl] / base if base else 0.0) for lbl in labels
        }
    return {"counts": counts, "country_percentages": country_pct}


@dataclass
class CooccurrenceMatrix:
    period: str
    matrix: list[list[int]]  # 10x10, symmetric, diagonal = per-label counts

    def check_invariants(self) -> None:
        n = len(SENWAVE_LABELS)
        for i in range(n):
            for j in range(n):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise AggregationError("co-occurrence matrix not symmetric")

    def normalized(self) -> list[list[float]]:
        total = sum(self.matrix[i][i] for i in range(len(SENWAVE_LABELS)))
        if total == 0:
            return [[0.0] * len(row) for row in self.matrix]
        return [[v / total for v in row] for row in self.matrix]


def cooccurrence(posts, period: str = "all") -> CooccurrenceMatrix:
    """Joint activation counts: M[i][j] = posts with labels i and j both active."""
    n = len(SENWAVE_LABELS)
    matrix = [[0] * n for _ in range(n)]
    for p in posts:
        idx = [i for i, on in enumerate(p.active) if on]
        for a in idx:
            for b in idx:
                matrix[a][b] += 1
    result = CooccurrenceMatrix(period=period, matrix=matrix)
    result.check_invariants()
    return result


def cooccurrence_by_year(posts) -> dict[str, CooccurrenceMatrix]:
    by_year: dict[str, list] = defaultdict(list)
    for p in posts:
        by_year[p.month[:4]].append(p)
    return {year: cooccurrence(by_year[year], period=year) for year in sorted(by_year)}


def correlate_with_cases(series: MonthlySeries, cases: CaseSeries) -> dict:
    """Pearson r between a monthly tweet series and a monthly case series."""
    tweet = {m: v for m, v in zip(series.months, series.values) if v is not None}
    case = cases.as_dict()
    overlap = sorted(set(tweet) & set(case))
    excluded = sorted((set(tweet) | set(case)) - set(overlap))
    if len(overlap) < 3:
        raise AggregationError(
            f"need >= 3 overlapping months, got {len(overlap)}"
        )
    xs = [float(tweet[m]) for m in overlap]
    ys = [float(case[m]) for m in overlap]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0 or syy == 0:
        raise AggregationError("zero variance in one of the series; correlation undefined")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    r = sxy / math.sqrt(sxx * syy)
    return {
        "pearson_r": r,
        "months": overlap,
        "tweets": xs,
        "cases": ys,
        "excluded_months": excluded,
    }


# ---------------------------------------------------------------------------
# Plot-data exports (one delimited file per figure)

def _write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def export_monthly_counts(series_by_country: dict[str, MonthlySeries], path) -> None:
    rows = []
    for country in sorted(series_by_country):
        s = series_by_country[country]
        for m, v in zip(s.months, s.values):
            rows.append([country, m, "" if v is None else v])
    _write_csv(Path(path), ["country", "month", "count"], rows)


def export_cases(cases: dict[str, CaseSeries], path) -> None:
    rows = []
    for country in sorted(cases):
        s = cases[country]
        for m, v in zip(s.months, s.counts):
            rows.append([country, m, v])
    _write_csv(Path(path), ["country", "month", "cases"], rows)


def export_label_distribution(dist: LabelCountDistribution, path) -> None:
    rows = [[k, dist.buckets[k], f"{dist.percentages[k]:.4f}"]
            for k in ("0", "1", "2", "3+")]
    _write_csv(Path(path), ["labels", "count", "percentage"], rows)


def export_sentiment_totals(totals: dict, path) -> None:
    rows = [[lbl, n] for lbl, n in totals["counts"].items()]
    _write_csv(Path(path), ["sentiment", "count"], rows)


def export_cooccurrence(matrices: dict[str, CooccurrenceMatrix], path) -> None:
    rows = []
    for period in sorted(matrices):
        m = matrices[period]
        norm = m.normalized()
        for i, a in enumerate(SENWAVE_LABELS):
            for j, b in enumerate(SENWAVE_LABELS):
                rows.append([period, a, b, m.matrix[i][j], f"{norm[i][j]:.6f}"])
    _write_csv(Path(path), ["period", "label_a", "label_b", "count", "share"], rows)


def export_polarity_series(series: dict[str, dict[str, MonthlySeries]], path) -> None:
    """series: method -> country -> MonthlySeries of monthly means."""
    rows = []
    for method in sorted(series):
        for country in sorted(series[method]):
            s = series[method][country]
            ns = s.n or [0] * len(s.months)
            for m, v, k in zip(s.months, s.values, ns):
                rows.append([country, m, method,
                             "" if v is None else f"{v:.6f}", k])
    _write_csv(Path(path), ["country", "month", "method", "mean_polarity", "n"], rows)
