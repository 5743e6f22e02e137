"""Human-in-the-loop annotation queue with durable decisions and leasing.

The queue is two files: tasks.jsonl (written once at bootstrap) and
decisions.jsonl (append-only, fsynced before a decision is acknowledged).
State is rebuilt from those two files, so a crash never loses an
acknowledged decision. Tasks are leased to one client at a time; an expired
lease silently requeues the task.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .classify import classify_binary, classify_sentiment
from .corpus import _atomic_write, dump_record
from .labels import BINARY_LABELS, HINDUPHOBIC, POSITIVE_NEUTRAL, SENWAVE_LABELS
from .posts import NormalizedPost

log = logging.getLogger(__name__)

DEFAULT_LEASE_SECONDS = 300.0

STATUS_PENDING = "pending"
STATUS_CONFIRMED = "confirmed"
STATUS_OVERRIDDEN = "overridden"
STATUS_SKIPPED = "skipped"

ACTIONS = ("confirm", "override", "skip")
_ACTION_STATUS = {
    "confirm": STATUS_CONFIRMED,
    "override": STATUS_OVERRIDDEN,
    "skip": STATUS_SKIPPED,
}


class AnnotationError(ValueError):
    pass


class ConflictError(AnnotationError):
    """The task already has a decision."""


@dataclass
class AnnotationTask:
    post_id: str
    text: str
    country: str
    month: str
    proposed_binary: str | None = None
    proposed_confidence: float | None = None
    proposed_sentiments: list[str] = field(default_factory=list)
    status: str = STATUS_PENDING
    binary: str | None = None
    sentiments: list[str] = field(default_factory=list)
    decided_by: str | None = None
    decided_at: str | None = None

    def to_record(self) -> dict:
        return {
            "post_id": self.post_id,
            "text": self.text,
            "country": self.country,
            "month": self.month,
            "proposed_binary": self.proposed_binary,
            "proposed_confidence": self.proposed_confidence,
            "proposed_sentiments": self.proposed_sentiments,
        }

    def public_view(self) -> dict:
        return {
            **self.to_record(),
            "status": self.status,
            "binary": self.binary,
            "sentiments": self.sentiments,
            "decided_by": self.decided_by,
            "decided_at": self.decided_at,
        }


def bootstrap_labels(corpus, suggester, n_manual: int,
                     out_dir, threshold: float = 0.5) -> "AnnotationQueue":
    """Queue all corpus posts: the first n_manual proposal-free, the rest
    with the suggester's machine proposals."""
    posts = [NormalizedPost.from_record(rec) for rec in corpus.iter_records()]
    if n_manual > len(posts):
        log.warning("n_manual=%d exceeds corpus size %d; clamping",
                    n_manual, len(posts))
        n_manual = len(posts)
    tasks = []
    for i, post in enumerate(posts):
        task = AnnotationTask(
            post_id=post.id,
            text=post.normalized_text,
            country=post.country,
            month=post.month,
        )
        if i >= n_manual:
            binary = classify_binary(post, suggester)
            sentiment = classify_sentiment(post, suggester, threshold)
            task.proposed_binary = binary.label
            task.proposed_confidence = binary.confidence
            task.proposed_sentiments = sentiment.active_labels()
        tasks.append(task)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _atomic_write(out_dir / "tasks.jsonl",
                  (dump_record(t.to_record()) for t in tasks))
    # fresh queue: truncate any stale decision log
    _atomic_write(out_dir / "decisions.jsonl", [])
    return AnnotationQueue(out_dir)


class AnnotationQueue:
    """On-disk task queue with in-memory lease tracking."""

    def __init__(self, root, lease_seconds: float = DEFAULT_LEASE_SECONDS,
                 clock=time.monotonic):
        self.root = Path(root)
        self.lease_seconds = lease_seconds
        self._clock = clock
        self._lock = threading.Lock()
        self._tasks: dict[str, AnnotationTask] = {}
        self._order: list[str] = []
        self._leases: dict[str, tuple[str, float]] = {}  # id -> (client, expiry)
        self._decisions_path = self.root / "decisions.jsonl"
        self._load()

    def _load(self) -> None:
        tasks_path = self.root / "tasks.jsonl"
        if not tasks_path.exists():
            raise AnnotationError(f"no task queue at {self.root}")
        with open(tasks_path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                task = AnnotationTask(**rec)
                self._tasks[task.post_id] = task
                self._order.append(task.post_id)
        if self._decisions_path.exists():
            with open(self._decisions_path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    self._apply_decision(json.loads(line))

    def _apply_decision(self, rec: dict) -> None:
        task = self._tasks.get(rec["post_id"])
        if task is None:
            log.warning("decision for unknown task %s ignored", rec.get("post_id"))
            return
        task.status = rec["status"]
        task.binary = rec.get("binary")
        task.sentiments = list(rec.get("sentiments", []))
        task.decided_by = rec.get("decided_by")
        task.decided_at = rec.get("decided_at")

    def __len__(self) -> int:
        return len(self._tasks)

    def get(self, post_id: str) -> AnnotationTask:
        try:
            return self._tasks[post_id]
        except KeyError:
            raise AnnotationError(f"unknown task: {post_id}") from None

    def next_task(self, client: str) -> AnnotationTask | None:
        """Lease the first pending task not currently leased to someone else."""
        now = self._clock()
        with self._lock:
            for post_id in self._order:
                task = self._tasks[post_id]
                if task.status != STATUS_PENDING:
                    continue
                lease = self._leases.get(post_id)
                if lease is not None and lease[1] > now and lease[0] != client:
                    continue
                self._leases[post_id] = (client, now + self.lease_seconds)
                return task
            return None

    def decide(self, post_id: str, action: str, binary: str | None = None,
               sentiments=None, decided_by: str = "anonymous") -> AnnotationTask:
        """Apply one decision; appends durably before returning."""
        if action not in ACTIONS:
            raise AnnotationError(f"unknown action: {action}")
        sentiments = list(sentiments or [])
        for s in sentiments:
            if s not in SENWAVE_LABELS:
                raise AnnotationError(f"unknown sentiment label: {s}")
        with self._lock:
            task = self.get(post_id)
            if task.status != STATUS_PENDING:
                raise ConflictError(f"task {post_id} already decided: {task.status}")
            if action == "confirm":
                if task.proposed_binary is not None:
                    final_binary = task.proposed_binary
                    final_sentiments = list(task.proposed_sentiments)
                elif binary is not None:
                    # manual-phase task: confirm carries explicit labels
                    final_binary = binary
                    final_sentiments = sentiments
                else:
                    raise AnnotationError(
                        f"task {post_id} has no machine proposal; supply labels"
                    )
            elif action == "override":
                if binary is None:
                    raise AnnotationError("override requires a binary label")
                final_binary = binary
                final_sentiments = sentiments
            else:  # skip
                final_binary = None
                final_sentiments = []
            if final_binary is not None and final_binary not in BINARY_LABELS:
                raise AnnotationError(f"unknown binary label: {final_binary}")
            record = {
                "post_id": post_id,
                "status": _ACTION_STATUS[action],
                "binary": final_binary,
                "sentiments": final_sentiments,
                "decided_by": decided_by,
                "decided_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            }
            # durability: the decision hits disk before we acknowledge it
            with open(self._decisions_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._apply_decision(record)
            self._leases.pop(post_id, None)
            return task

    def stats(self) -> dict:
        decided = [t for t in self._tasks.values() if t.status != STATUS_PENDING]
        judged = [t for t in decided
                  if t.status in (STATUS_CONFIRMED, STATUS_OVERRIDDEN)
                  and t.proposed_binary is not None]
        agreement = (
            sum(1 for t in judged if t.binary == t.proposed_binary) / len(judged)
            if judged else None
        )
        overrides: dict[str, int] = {}
        for t in decided:
            if t.status == STATUS_OVERRIDDEN and t.binary is not None:
                overrides[t.binary] = overrides.get(t.binary, 0) + 1
        return {
            "total": len(self._tasks),
            "decided": len(decided),
            "confirmed": sum(1 for t in decided if t.status == STATUS_CONFIRMED),
            "overridden": sum(1 for t in decided if t.status == STATUS_OVERRIDDEN),
            "skipped": sum(1 for t in decided if t.status == STATUS_SKIPPED),
            "agreement": agreement,
            "override_counts": overrides,
        }

    def export_labeled(self, path) -> dict:
        """Write confirmed/overridden tasks as human-verified labeled records."""
        counts = {HINDUPHOBIC: 0, POSITIVE_NEUTRAL: 0}
        lines = []
        for post_id in self._order:
            task = self._tasks[post_id]
            if task.status not in (STATUS_CONFIRMED, STATUS_OVERRIDDEN):
                continue
            if task.binary is None:
                continue
            counts[task.binary] += 1
            lines.append(dump_record({
                "id": task.post_id,
                "binary_label": task.binary,
                "sentiment_labels": task.sentiments,
                "label_source": "human_verified",
            }))
        _atomic_write(Path(path), lines)
        return {"exported": len(lines), "counts": counts}
