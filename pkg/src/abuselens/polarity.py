"""Per-post polarity scoring by two methods, plus monthly means.

The lexicon method averages matched word polarities from a shipped word
list. The custom-weight method sums the integer weights of a post's active
sentiment labels and normalizes by max|weight| times the active count, so a
lone "annoyed" label with default weights scores exactly -0.20.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from importlib import resources

from .aggregate import MonthlySeries
from .labels import SENWAVE_LABELS
from .posts import iter_months

DEFAULT_WEIGHTS = {
    "optimistic": 2,
    "thankful": 3,
    "empathetic": 0,
    "pessimistic": -4,
    "anxious": -2,
    "sad": -3,
    "annoyed": -1,
    "denial": -5,
    "official_report": 0,
    "joking": 1,
}

METHOD_LEXICON = "lexicon"
METHOD_CUSTOM = "custom_weight"


@dataclass(frozen=True)
class PolarityScore:
    value: float
    method: str


class SentimentWeights:
    """One integer weight per sentiment label."""

    def __init__(self, weights: dict[str, float] | None = None):
        weights = dict(weights or DEFAULT_WEIGHTS)
        missing = set(SENWAVE_LABELS) - set(weights)
        if missing:
            raise ValueError(f"missing weights for labels: {sorted(missing)}")
        extra = set(weights) - set(SENWAVE_LABELS)
        if extra:
            raise ValueError(f"weights for unknown labels: {sorted(extra)}")
        self.by_label = {lbl: weights[lbl] for lbl in SENWAVE_LABELS}
        self.max_abs = max(abs(w) for w in self.by_label.values())
        if self.max_abs == 0:
            raise ValueError("all weights are zero")

    @classmethod
    def from_file(cls, path) -> "SentimentWeights":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def bounds(self) -> tuple[float, float]:
        """Attainable [min, max] of the custom score under these weights."""
        lo = min(self.by_label.values()) / self.max_abs
        hi = max(self.by_label.values()) / self.max_abs
        return min(lo, 0.0), max(hi, 0.0)


class PolarityLexicon:
    """Case-insensitive word -> polarity in [-1, 1]."""

    def __init__(self, words: dict[str, float]):
        self.words = {}
        for word, value in words.items():
            v = float(value)
            if not -1.0 <= v <= 1.0:
                raise ValueError(f"lexicon value out of [-1,1] for {word!r}: {v}")
            self.words[word.lower()] = v

    @classmethod
    def default(cls) -> "PolarityLexicon":
        text = resources.files("abuselens.data").joinpath("lexicon.json").read_text("utf-8")
        return cls(json.loads(text))

    @classmethod
    def from_file(cls, path) -> "PolarityLexicon":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def get(self, token: str):
        return self.words.get(token.lower())


def lexicon_polarity(post, lexicon: PolarityLexicon) -> PolarityScore:
    """Arithmetic mean of matched tokens' lexicon values; 0.0 with no match."""
    hits = [v for v in (lexicon.get(t) for t in post.tokens) if v is not None]
    value = sum(hits) / len(hits) if hits else 0.0
    return PolarityScore(value=value, method=METHOD_LEXICON)


def custom_polarity(active, weights: SentimentWeights) -> PolarityScore:
    """Sum of active-label weights over (max|w| * active count); 0.0 if none.

    `active` is a SentimentVector, a 10-long boolean vector, or label names.
    Invariant under positive rescaling of all weights.
    """
    if hasattr(active, "active_labels"):
        labels = active.active_labels()
    else:
        items = list(active)
        if items and isinstance(items[0], str):
            labels = items
        else:
            labels = [lbl for lbl, on in zip(SENWAVE_LABELS, items) if on]
    if not labels:
        return PolarityScore(value=0.0, method=METHOD_CUSTOM)
    total = sum(weights.by_label[lbl] for lbl in labels)
    value = total / (weights.max_abs * len(labels))
    return PolarityScore(value=value, method=METHOD_CUSTOM)


def monthly_mean_polarity(scored, method: str) -> dict[str, MonthlySeries]:
    """Per (country, month) mean polarity; empty months emit None, not 0.

    `scored` is an iterable of (country, month, value) triples for the method.
    """
    sums: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
    counts: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    months_seen = set()
    for country, month, value in scored:
        sums[country][month] += value
        counts[country][month] += 1
        months_seen.add(month)
    if not months_seen:
        return {}
    full = list(iter_months(min(months_seen), max(months_seen)))
    result = {}
    for country in sorted(sums):
        values = []
        ns = []
        for m in full:
            n = counts[country][m]
            ns.append(n)
            values.append(sums[country][m] / n if n else None)
        result[country] = MonthlySeries(country=country, months=full,
                                        values=values, kind=f"mean_{method}", n=ns)
    return result
