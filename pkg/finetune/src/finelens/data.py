"""Dataset loading: labeled-record JSONL and the 10-column sentiment CSV."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

SENTIMENT_LABELS = (
    "optimistic",
    "thankful",
    "empathetic",
    "pessimistic",
    "anxious",
    "sad",
    "annoyed",
    "denial",
    "official_report",
    "joking",
)
HINDUPHOBIC = "hinduphobic"
POSITIVE_NEUTRAL = "positive_neutral"
BINARY_LABELS = (HINDUPHOBIC, POSITIVE_NEUTRAL)


class DatasetError(ValueError):
    pass


@dataclass
class Example:
    id: str
    text: str
    binary_label: str | None = None
    sentiment_labels: tuple[str, ...] = ()

    @property
    def binary_target(self) -> float:
        return 1.0 if self.binary_label == HINDUPHOBIC else 0.0

    def sentiment_targets(self) -> list[float]:
        return [1.0 if lbl in self.sentiment_labels else 0.0
                for lbl in SENTIMENT_LABELS]


def load_labeled_records(path) -> list[Example]:
    """Labeled-record JSONL; each training record must also carry `text`."""
    examples = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, 1):
            if not line.strip():
                continue
            rec = json.loads(line)
            if "text" not in rec:
                raise DatasetError(
                    f"line {i}: training records need a 'text' field")
            binary = rec.get("binary_label")
            if binary is not None and binary not in BINARY_LABELS:
                raise DatasetError(f"line {i}: unknown binary_label {binary!r}")
            sentiments = tuple(rec.get("sentiment_labels", ()))
            for s in sentiments:
                if s not in SENTIMENT_LABELS:
                    raise DatasetError(f"line {i}: unknown sentiment label {s!r}")
            examples.append(Example(id=str(rec.get("id", i)), text=rec["text"],
                                    binary_label=binary,
                                    sentiment_labels=sentiments))
    if not examples:
        raise DatasetError(f"no records in {path}")
    return examples


def load_sentiment_csv(path) -> list[Example]:
    """CSV with a text column plus the ten label columns (0/1), fixed order."""
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        missing = [lbl for lbl in SENTIMENT_LABELS if lbl not in fields]
        if missing:
            raise DatasetError(
                f"sentiment CSV missing label columns (order is fixed): {missing}")
        text_col = next((c for c in ("text", "tweet", "Tweet") if c in fields), None)
        if text_col is None:
            raise DatasetError("sentiment CSV needs a text/tweet column")
        examples = []
        for i, row in enumerate(reader):
            active = tuple(lbl for lbl in SENTIMENT_LABELS
                           if str(row[lbl]).strip() in ("1", "1.0", "true", "True"))
            examples.append(Example(id=str(row.get("id", i)),
                                    text=row[text_col],
                                    sentiment_labels=active))
    if not examples:
        raise DatasetError(f"no rows in {path}")
    return examples


class Tokenizer:
    """Whitespace tokenizer over a vocabulary built from the training texts."""

    PAD = 0
    UNK = 1

    def __init__(self, vocab: dict[str, int], max_length: int):
        self.vocab = vocab
        self.max_length = max_length

    @classmethod
    def fit(cls, texts, max_length: int, max_vocab: int = 30_000) -> "Tokenizer":
        counts: dict[str, int] = {}
        for text in texts:
            for token in text.lower().split():
                counts[token] = counts.get(token, 0) + 1
        ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        vocab = {tok: i + 2 for i, (tok, _) in enumerate(ordered[: max_vocab - 2])}
        return cls(vocab, max_length)

    def __len__(self) -> int:
        return len(self.vocab) + 2

    def encode(self, text: str) -> tuple[list[int], list[int]]:
        ids = [self.vocab.get(t, self.UNK) for t in text.lower().split()]
        ids = ids[: self.max_length]
        mask = [1] * len(ids) + [0] * (self.max_length - len(ids))
        ids = ids + [self.PAD] * (self.max_length - len(ids))
        return ids, mask

    def as_metadata(self) -> dict:
        return {
            "vocab": self.vocab,
            "unk_id": self.UNK,
            "pad_id": self.PAD,
            "max_length": self.max_length,
        }
