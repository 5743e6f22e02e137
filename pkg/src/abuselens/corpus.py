"""Partitioned corpus persistence: ingestion, validation, export.

Layout on disk:

    corpus/<name>/manifest.json
    corpus/<name>/<CC>/<YYYY-MM>.jsonl
    corpus/<name>/rejects.jsonl

Records are newline-delimited JSON. Writes go through a temp file and a
rename so concurrent readers never see a partial partition.
"""

from __future__ import annotations

import csv
import json
import os
import re
from dataclasses import dataclass
from pathlib import Path

from .posts import TimestampError, iter_months, month_key, parse_timestamp

DEFAULT_COUNTRIES = ("AU", "BR", "IN", "ID", "JP", "GB")

_COUNTRY_RE = re.compile(r"^[A-Z]{2}$")


class SchemaError(ValueError):
    pass


class CorpusError(ValueError):
    pass


def _atomic_write(path: Path, lines) -> int:
    """Write lines (str, newline-terminated) atomically; returns line count."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    n = 0
    with open(tmp, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line)
            n += 1
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)
    return n


def dump_record(rec: dict) -> str:
    return json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n"


class Corpus:
    """Handle to an on-disk corpus directory."""

    def __init__(self, root: Path):
        self.root = Path(root)

    @property
    def manifest_path(self) -> Path:
        return self.root / "manifest.json"

    @property
    def manifest(self) -> dict:
        with open(self.manifest_path, encoding="utf-8") as fh:
            return json.load(fh)

    @property
    def name(self) -> str:
        return self.manifest["name"]

    def partition_keys(self) -> list[tuple[str, str]]:
        """Sorted (country, month) keys present in the manifest."""
        return sorted(
            tuple(key.split("/")) for key in self.manifest["partitions"]
        )

    def partition_path(self, country: str, month: str) -> Path:
        return self.root / country / f"{month}.jsonl"

    def iter_partition(self, country: str, month: str):
        with open(self.partition_path(country, month), encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    yield json.loads(line)

    def iter_records(self):
        """All records in deterministic (country, month, file order)."""
        for country, month in self.partition_keys():
            yield from self.iter_partition(country, month)

    def record_count(self) -> int:
        return self.manifest["record_count"]

    def check_conservation(self) -> None:
        m = self.manifest
        total = sum(m["partitions"].values())
        if total != m["record_count"]:
            raise CorpusError(
                f"partition counts sum to {total}, manifest says {m['record_count']}"
            )

    def export(self, path: Path) -> int:
        """Flatten the corpus to a single JSONL file (round-trip friendly)."""
        return _atomic_write(
            Path(path), (dump_record(rec) for rec in self.iter_records())
        )


def _read_rows(path: Path, fmt: str):
    if fmt == "csv":
        with open(path, encoding="utf-8", newline="") as fh:
            yield from csv.DictReader(fh)
    elif fmt == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for i, line in enumerate(fh):
                if not line.strip():
                    continue
                try:
                    yield json.loads(line)
                except json.JSONDecodeError:
                    yield {"__parse_error__": f"line {i + 1}: invalid JSON"}
    else:
        raise SchemaError(f"unknown format: {fmt}")


def ingest(path, out_root, name, fmt="jsonl", schema_map=None,
           source=None, countries=None) -> Corpus:
    """Validate rows from a CSV/JSONL file into a partitioned corpus.

    Invalid rows go to rejects.jsonl with a reason; they never abort the run.
    A missing required column, by contrast, is a schema error.
    """
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file does not exist: {path}")
    schema_map = schema_map or {
        "id": "id", "text": "text", "timestamp": "timestamp", "country": "country",
    }
    for col in ("id", "text", "timestamp", "country"):
        if col not in schema_map:
            raise SchemaError(f"schema_map missing required column mapping: {col}")

    partitions: dict[tuple[str, str], list[dict]] = {}
    rejects: list[dict] = []
    seen_ids: set[str] = set()
    months: list[str] = []
    country_set = set(countries) if countries else None

    for row in _read_rows(path, fmt):
        if "__parse_error__" in row:
            rejects.append({"row": None, "reason": row["__parse_error__"]})
            continue
        try:
            rec = {field: row.get(col) for field, col in schema_map.items()}
        except AttributeError:
            rejects.append({"row": row, "reason": "row is not a mapping"})
            continue
        missing = [c for c in ("id", "text", "timestamp", "country")
                   if rec.get(c) in (None, "")]
        if missing:
            rejects.append({"row": row, "reason": f"missing fields: {missing}"})
            continue
        rid = str(rec["id"])
        if rid in seen_ids:
            rejects.append({"row": row, "reason": f"duplicate id: {rid}"})
            continue
        country = str(rec["country"]).upper()
        if not _COUNTRY_RE.match(country):
            rejects.append({"row": row, "reason": f"invalid country code: {rec['country']}"})
            continue
        if country_set is not None and country not in country_set:
            rejects.append({"row": row, "reason": f"country not in configured set: {country}"})
            continue
        try:
            ts = parse_timestamp(rec["timestamp"])
        except TimestampError as exc:
            rejects.append({"row": row, "reason": str(exc)})
            continue
        iso = ts.strftime("%Y-%m-%dT%H:%M:%SZ")
        record = {
            "id": rid,
            "text": str(rec["text"]),
            "timestamp": iso,
            "country": country,
        }
        if rec.get("language_hint"):
            record["language_hint"] = str(rec["language_hint"])
        seen_ids.add(rid)
        month = month_key(iso)
        months.append(month)
        partitions.setdefault((country, month), []).append(record)

    root = Path(out_root) / name
    total = 0
    manifest_partitions = {}
    for (country, month), recs in sorted(partitions.items()):
        n = _atomic_write(
            root / country / f"{month}.jsonl",
            (dump_record(r) for r in recs),
        )
        manifest_partitions[f"{country}/{month}"] = n
        total += n
    _atomic_write(root / "rejects.jsonl", (dump_record(r) for r in rejects))
    manifest = {
        "name": name,
        "source": source or str(path),
        "date_range": {"first_month": min(months), "last_month": max(months)} if months else None,
        "countries": sorted({c for c, _ in partitions}),
        "record_count": total,
        "reject_count": len(rejects),
        "partitions": manifest_partitions,
    }
    _atomic_write(root / "manifest.json",
                  [json.dumps(manifest, indent=2, sort_keys=True) + "\n"])
    corpus = Corpus(root)
    corpus.check_conservation()
    return corpus


def write_corpus(out_root, name, records, source="memory") -> Corpus:
    """Persist already-validated records (e.g. normalized posts) as a corpus."""
    partitions: dict[tuple[str, str], list[dict]] = {}
    months = []
    for rec in records:
        month = month_key(rec["timestamp"])
        months.append(month)
        partitions.setdefault((rec["country"], month), []).append(rec)
    root = Path(out_root) / name
    total = 0
    manifest_partitions = {}
    for (country, month), recs in sorted(partitions.items()):
        n = _atomic_write(root / country / f"{month}.jsonl",
                          (dump_record(r) for r in recs))
        manifest_partitions[f"{country}/{month}"] = n
        total += n
    manifest = {
        "name": name,
        "source": source,
        "date_range": {"first_month": min(months), "last_month": max(months)} if months else None,
        "countries": sorted({c for c, _ in partitions}),
        "record_count": total,
        "reject_count": 0,
        "partitions": manifest_partitions,
    }
    _atomic_write(root / "manifest.json",
                  [json.dumps(manifest, indent=2, sort_keys=True) + "\n"])
    corpus = Corpus(root)
    corpus.check_conservation()
    return corpus


@dataclass
class CaseSeries:
    """Monthly COVID case counts per country."""
    country: str
    months: list[str]
    counts: list[int]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.months, self.counts))


def load_cases(path, fill_zero=False) -> dict[str, CaseSeries]:
    """Load a country,month,cases CSV into contiguous monthly series."""
    rows: dict[str, dict[str, int]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            country = row["country"].strip().upper()
            month = row["month"].strip()
            if not re.match(r"^\d{4}-\d{2}$", month):
                raise CorpusError(f"bad month key: {month!r}")
            count = int(row["cases"])
            if count < 0:
                raise CorpusError(f"negative case count for {country} {month}")
            rows.setdefault(country, {})[month] = count
    series = {}
    for country, by_month in rows.items():
        months = sorted(by_month)
        full = list(iter_months(months[0], months[-1]))
        counts = []
        for m in full:
            if m in by_month:
                counts.append(by_month[m])
            elif fill_zero:
                counts.append(0)
            else:
                raise CorpusError(
                    f"gap in case series for {country} at {m}; pass fill_zero to pad"
                )
        series[country] = CaseSeries(country=country, months=full, counts=counts)
    return series
