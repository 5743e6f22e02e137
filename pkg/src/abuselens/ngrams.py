"""Bigram/trigram extraction and top-k reporting, globally and per country.

Stopwords are removed before windowing, so per post the number of n-grams is
max(0, m - n + 1) where m counts the surviving tokens.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path


def default_stopwords() -> frozenset[str]:
    text = resources.files("abuselens.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def load_stopwords(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(w.strip() for w in fh if w.strip())


def extract_ngrams(tokens, n: int, stopwords=frozenset()) -> list[str]:
    """Space-joined n-grams over the stopword-filtered token sequence."""
    if n not in (2, 3):
        raise ValueError(f"n must be 2 or 3, got {n}")
    if hasattr(tokens, "tokens"):
        tokens = tokens.tokens
    kept = [t for t in tokens if t not in stopwords]
    return [" ".join(kept[i:i + n]) for i in range(len(kept) - n + 1)]


@dataclass
class NGramTable:
    n: int
    scope: str  # "global" or a country code
    filter: str  # "all" or "hinduphobic_only"
    counts: Counter = field(default_factory=Counter)

    def add_post(self, tokens, stopwords=frozenset()) -> None:
        self.counts.update(extract_ngrams(tokens, self.n, stopwords))

    def merge(self, other: "NGramTable") -> "NGramTable":
        if other.n != self.n:
            raise ValueError("cannot merge tables with different n")
        merged = NGramTable(n=self.n, scope=self.scope, filter=self.filter,
                            counts=Counter(self.counts))
        merged.counts.update(other.counts)
        return merged


def count_ngrams(posts, n: int, stopwords=frozenset(), scope="global",
                 filter_tag="all") -> NGramTable:
    table = NGramTable(n=n, scope=scope, filter=filter_tag)
    for post in posts:
        table.add_post(post, stopwords)
    return table


def topk(table: NGramTable, k: int = 10) -> list[tuple[str, int]]:
    """Top-k by count, ties broken lexicographically for determinism."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ordered = sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ordered[:k]


def export_tables(tables: list[NGramTable], csv_path, topk_json_path=None, k=10) -> None:
    """CSV of scope,n,ngram,count plus an optional top-k JSON for plotting."""
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scope", "n", "ngram", "count"])
        for table in tables:
            for ngram, count in sorted(table.counts.items(),
                                       key=lambda kv: (-kv[1], kv[0])):
                writer.writerow([table.scope, table.n, ngram, count])
    if topk_json_path is not None:
        payload = [
            {
                "scope": t.scope,
                "n": t.n,
                "filter": t.filter,
                "top": [{"ngram": g, "count": c} for g, c in topk(t, k)] if t.counts else [],
            }
            for t in tables
        ]
        with open(topk_json_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
