"""Post record types and timestamp helpers."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone


class TimestampError(ValueError):
    pass


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp into a UTC-aware datetime."""
    if isinstance(value, datetime):
        ts = value
    else:
        text = str(value).strip()
        if text.endswith("Z"):
            text = text[:-1] + "+00:00"
        try:
            ts = datetime.fromisoformat(text)
        except ValueError as exc:
            raise TimestampError(f"unparseable timestamp: {value!r}") from exc
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def month_key(timestamp: str | datetime) -> str:
    """UTC year-month key ('YYYY-MM') for partitioning and trend series."""
    ts = parse_timestamp(timestamp)
    return f"{ts.year:04d}-{ts.month:02d}"


def iter_months(first: str, last: str):
    """Yield contiguous 'YYYY-MM' keys from first to last inclusive."""
    y, m = int(first[:4]), int(first[5:7])
    ly, lm = int(last[:4]), int(last[5:7])
    while (y, m) <= (ly, lm):
        yield f"{y:04d}-{m:02d}"
        m += 1
        if m > 12:
            y, m = y + 1, 1


@dataclass(frozen=True)
class RawPost:
    id: str
    text: str
    timestamp: str
    country: str
    language_hint: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("post id must be non-empty")

    @property
    def month(self) -> str:
        return month_key(self.timestamp)


@dataclass
class NormalizedPost:
    id: str
    tokens: list[str]
    normalized_text: str
    applied_rules: list[str]
    timestamp: str
    country: str
    language_hint: str | None = None
    empty: bool = field(init=False)

    def __post_init__(self):
        self.empty = not self.tokens

    @property
    def month(self) -> str:
        return month_key(self.timestamp)

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "tokens": self.tokens,
            "normalized_text": self.normalized_text,
            "applied_rules": self.applied_rules,
            "timestamp": self.timestamp,
            "country": self.country,
            "language_hint": self.language_hint,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "NormalizedPost":
        return cls(
            id=rec["id"],
            tokens=list(rec["tokens"]),
            normalized_text=rec["normalized_text"],
            applied_rules=list(rec.get("applied_rules", [])),
            timestamp=rec["timestamp"],
            country=rec["country"],
            language_hint=rec.get("language_hint"),
        )
