"""Synthetic raw-post generation shared across the test modules."""

import json
import random
from pathlib import Path

COUNTRIES = ("AU", "BR", "IN", "ID", "JP", "GB")

SAMPLE_TEXTS = (
    "Stop the #CoronaJihad propaganda, they drink cow urine anyway",
    "Thank you for the food distribution drive, namaste to all volunteers",
    "I am so anxious and sad about the lockdown news today",
    "LOL this cow urine cure claim is ridiculous, total joke",
    "Official report says cases are rising again this month",
    "Grateful and thankful for the doctors, much respect",
    "These hindu superspreaders ruined everything #HinduVirus",
    "Donated blankets today, feeling hopeful and optimistic",
)


def make_raw_rows(n: int, seed: int = 7) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        month = rng.choice([f"2020-{m:02d}" for m in range(4, 10)])
        rows.append({
            "id": f"p{i}",
            "text": SAMPLE_TEXTS[i % len(SAMPLE_TEXTS)] + f" variation {i}",
            "timestamp": f"{month}-{rng.randint(1, 28):02d}T12:00:00Z",
            "country": rng.choice(COUNTRIES),
        })
    return rows


def write_jsonl(path: Path, rows) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return path
