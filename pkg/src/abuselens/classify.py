"""Pluggable classification backends and corpus-level inference.

Three backend kinds share one contract (a binary abuse decision plus ten
sentiment scores): the keyword-rule baseline, a portable TorchScript model
file, and a remote HTTP endpoint.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .corpus import Corpus, _atomic_write
from .labels import HINDUPHOBIC, POSITIVE_NEUTRAL, SENWAVE_LABELS
from .posts import NormalizedPost

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.5


class BackendError(RuntimeError):
    pass


class TransportError(BackendError):
    """Remote backend failure that is safe to retry."""


@dataclass(frozen=True)
class BinaryPrediction:
    label: str
    confidence: float
    backend_id: str

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of range: {self.confidence}")


@dataclass
class SentimentVector:
    scores: list[float]
    threshold: float = DEFAULT_THRESHOLD
    active: list[bool] = field(init=False)

    def __post_init__(self):
        if len(self.scores) != len(SENWAVE_LABELS):
            raise ValueError(f"expected {len(SENWAVE_LABELS)} scores, got {len(self.scores)}")
        for s in self.scores:
            if not 0.0 <= s <= 1.0:
                raise ValueError(f"score out of range: {s}")
        self.active = [s >= self.threshold for s in self.scores]

    def active_labels(self) -> list[str]:
        return [lbl for lbl, on in zip(SENWAVE_LABELS, self.active) if on]


class KeywordRuleSet:
    """Weighted negative/positive term lists seeded from the abuse lexicon."""

    def __init__(self, negative: dict[str, float], positive: dict[str, float],
                 sentiment_cues: dict[str, list[str]] | None = None):
        overlap = set(negative) & set(positive)
        if overlap:
            raise ValueError(f"terms in both polarity lists: {sorted(overlap)}")
        for term, w in list(negative.items()) + list(positive.items()):
            if w <= 0:
                raise ValueError(f"non-positive weight for {term!r}")
        self.negative = dict(negative)
        self.positive = dict(positive)
        self.sentiment_cues = {
            label: list((sentiment_cues or {}).get(label, []))
            for label in SENWAVE_LABELS
        }

    @classmethod
    def default(cls) -> "KeywordRuleSet":
        text = resources.files("abuselens.data").joinpath("keywords.json").read_text("utf-8")
        data = json.loads(text)
        return cls(data["negative"], data["positive"], data.get("sentiment_cues"))

    @classmethod
    def from_file(cls, path) -> "KeywordRuleSet":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(data["negative"], data["positive"], data.get("sentiment_cues"))


def _contains_term(padded_text: str, term: str) -> bool:
    return f" {term} " in padded_text


class KeywordBackend:
    """Deterministic rule-sum baseline; also the default HITL suggester."""

    kind = "keyword_rule"

    def __init__(self, rules: KeywordRuleSet | None = None, backend_id="keyword_rule:default"):
        self.rules = rules or KeywordRuleSet.default()
        self.backend_id = backend_id

    def _scores(self, post: NormalizedPost) -> tuple[float, float]:
        padded = f" {post.normalized_text} "
        neg = sum(w for term, w in self.rules.negative.items()
                  if _contains_term(padded, term))
        pos = sum(w for term, w in self.rules.positive.items()
                  if _contains_term(padded, term))
        return neg, pos

    def predict_binary(self, post: NormalizedPost) -> tuple[str, float]:
        neg, pos = self._scores(post)
        if neg + pos == 0:
            return POSITIVE_NEUTRAL, 0.5
        # ties go to positive_neutral: presumption of innocence
        label = HINDUPHOBIC if neg > pos else POSITIVE_NEUTRAL
        confidence = 0.5 + 0.5 * abs(neg - pos) / (neg + pos)
        return label, min(confidence, 1.0)

    def predict_sentiment(self, post: NormalizedPost) -> list[float]:
        padded = f" {post.normalized_text} "
        return [
            1.0 if any(_contains_term(padded, cue) for cue in self.rules.sentiment_cues[lbl])
            else 0.0
            for lbl in SENWAVE_LABELS
        ]


class PortableModelBackend:
    """TorchScript model file with a JSON metadata sidecar.

    The metadata declares the tokenizer vocabulary, max length and label
    order; a label-order mismatch with SENWAVE_LABELS rejects the load.
    """

    kind = "portable_model_file"

    def __init__(self, model_path):
        import torch  # heavyweight; only needed for this backend

        self.model_path = Path(model_path)
        meta_path = self.model_path.with_suffix(self.model_path.suffix + ".meta.json")
        if not meta_path.exists():
            raise BackendError(f"missing model metadata sidecar: {meta_path}")
        with open(meta_path, encoding="utf-8") as fh:
            self.meta = json.load(fh)
        if tuple(self.meta.get("sentiment_labels", ())) != SENWAVE_LABELS:
            raise BackendError("model metadata sentiment label order does not match pipeline")
        outputs = self.meta.get("outputs", {})
        if outputs.get("binary_logit") != 1 or outputs.get("sentiment_logits") != len(SENWAVE_LABELS):
            raise BackendError("model metadata output arity does not match consumer contract")
        tok = self.meta["tokenizer"]
        self.vocab = {str(k): int(v) for k, v in tok["vocab"].items()}
        self.unk_id = int(tok["unk_id"])
        self.pad_id = int(tok["pad_id"])
        self.max_length = int(tok["max_length"])
        self._torch = torch
        self.module = torch.jit.load(str(self.model_path))
        self.module.eval()
        self.backend_id = f"portable:{self.model_path.name}"

    def _encode(self, post: NormalizedPost):
        torch = self._torch
        ids = [self.vocab.get(t, self.unk_id) for t in post.tokens]
        if len(ids) > self.max_length:
            log.warning("post %s exceeds max token length %d; truncating",
                        post.id, self.max_length)
            ids = ids[: self.max_length]
        mask = [1] * len(ids) + [0] * (self.max_length - len(ids))
        ids = ids + [self.pad_id] * (self.max_length - len(ids))
        type_ids = [0] * self.max_length
        return (
            torch.tensor([ids], dtype=torch.long),
            torch.tensor([mask], dtype=torch.long),
            torch.tensor([type_ids], dtype=torch.long),
        )

    def _logits(self, post: NormalizedPost):
        torch = self._torch
        with torch.no_grad():
            binary_logit, sentiment_logits = self.module(*self._encode(post))
        return float(binary_logit.reshape(-1)[0]), [float(x) for x in sentiment_logits.reshape(-1)]

    def predict_binary(self, post: NormalizedPost) -> tuple[str, float]:
        logit, _ = self._logits(post)
        p = 1.0 / (1.0 + math.exp(-logit))
        if p >= 0.5:
            return HINDUPHOBIC, p
        return POSITIVE_NEUTRAL, 1.0 - p

    def predict_sentiment(self, post: NormalizedPost) -> list[float]:
        _, logits = self._logits(post)
        return [1.0 / (1.0 + math.exp(-x)) for x in logits]


class RemoteHttpBackend:
    """POST /classify with {"texts": [...]} returning binary + sentiment logits."""

    kind = "remote_http"

    def __init__(self, endpoint: str, retries: int = 3, timeout: float = 10.0):
        self.endpoint = endpoint.rstrip("/")
        self.retries = retries
        self.timeout = timeout
        self.backend_id = f"remote:{self.endpoint}"

    def _call(self, texts: list[str]) -> list[dict]:
        import requests

        last_exc = None
        for attempt in range(self.retries):
            try:
                resp = requests.post(
                    f"{self.endpoint}/classify",
                    json={"texts": texts},
                    timeout=self.timeout,
                )
                resp.raise_for_status()
                results = resp.json()["results"]
                if len(results) != len(texts):
                    raise BackendError("remote backend returned wrong arity")
                return results
            except BackendError:
                raise
            except Exception as exc:  # connection/HTTP errors are retryable
                last_exc = exc
                time.sleep(min(0.2 * 2 ** attempt, 2.0))
        raise TransportError(f"remote backend unavailable: {last_exc}") from last_exc

    def _logits(self, post: NormalizedPost):
        result = self._call([post.normalized_text])[0]
        logits = result["sentiment_logits"]
        if len(logits) != len(SENWAVE_LABELS):
            raise BackendError("remote backend returned wrong sentiment arity")
        return float(result["binary_logit"]), [float(x) for x in logits]

    def predict_binary(self, post: NormalizedPost) -> tuple[str, float]:
        logit, _ = self._logits(post)
        p = 1.0 / (1.0 + math.exp(-logit))
        return (HINDUPHOBIC, p) if p >= 0.5 else (POSITIVE_NEUTRAL, 1.0 - p)

    def predict_sentiment(self, post: NormalizedPost) -> list[float]:
        _, logits = self._logits(post)
        return [1.0 / (1.0 + math.exp(-x)) for x in logits]


@dataclass
class ModelBackendDescriptor:
    kind: str  # keyword_rule | portable_model_file | remote_http
    path: str | None = None  # model file or rules file
    endpoint: str | None = None

    def load(self):
        if self.kind == "keyword_rule":
            rules = KeywordRuleSet.from_file(self.path) if self.path else None
            return KeywordBackend(rules=rules)
        if self.kind == "portable_model_file":
            if not self.path:
                raise BackendError("portable_model_file backend needs a path")
            return PortableModelBackend(self.path)
        if self.kind == "remote_http":
            if not self.endpoint:
                raise BackendError("remote_http backend needs an endpoint")
            return RemoteHttpBackend(self.endpoint)
        raise BackendError(f"unknown backend kind: {self.kind}")

    @classmethod
    def from_dict(cls, data: dict) -> "ModelBackendDescriptor":
        return cls(kind=data["kind"], path=data.get("path"),
                   endpoint=data.get("endpoint"))


def classify_binary(post: NormalizedPost, backend) -> BinaryPrediction:
    label, confidence = backend.predict_binary(post)
    return BinaryPrediction(label=label, confidence=round(confidence, 6),
                            backend_id=backend.backend_id)


def classify_sentiment(post: NormalizedPost, backend,
                       threshold: float = DEFAULT_THRESHOLD) -> SentimentVector:
    scores = [round(s, 6) for s in backend.predict_sentiment(post)]
    return SentimentVector(scores=scores, threshold=threshold)


def prediction_record(post: NormalizedPost, binary: BinaryPrediction,
                      sentiment: SentimentVector) -> dict:
    return {
        "id": post.id,
        "binary": binary.label,
        "confidence": binary.confidence,
        "sentiment_scores": sentiment.scores,
    }


def classify_corpus(corpus: Corpus, backend, threshold: float = DEFAULT_THRESHOLD,
                    resume: bool = True) -> dict:
    """Classify every record, persisting predictions next to each partition.

    A checkpoint file records completed partitions so an interrupted run
    resumes without recomputing (or duplicating) finished partitions.
    """
    checkpoint_path = corpus.root / "predictions.checkpoint.json"
    done: set[str] = set()
    if resume and checkpoint_path.exists():
        with open(checkpoint_path, encoding="utf-8") as fh:
            done = set(json.load(fh)["completed"])

    digest = hashlib.sha256()
    start = time.perf_counter()
    total = 0
    for country, month in corpus.partition_keys():
        key = f"{country}/{month}"
        out_path = corpus.root / country / f"{month}.predictions.jsonl"
        if key in done and out_path.exists():
            with open(out_path, "rb") as fh:
                for line in fh:
                    digest.update(line)
                    total += 1
            continue
        lines = []
        for rec in corpus.iter_partition(country, month):
            post = NormalizedPost.from_record(rec)
            binary = classify_binary(post, backend)
            sentiment = classify_sentiment(post, backend, threshold)
            line = json.dumps(prediction_record(post, binary, sentiment),
                              sort_keys=True) + "\n"
            lines.append(line)
            digest.update(line.encode("utf-8"))
            total += 1
        _atomic_write(out_path, lines)
        done.add(key)
        _atomic_write(checkpoint_path,
                      [json.dumps({"completed": sorted(done)}) + "\n"])
    elapsed = time.perf_counter() - start
    summary = {
        "records": total,
        "seconds": round(elapsed, 3),
        "throughput_per_s": round(total / elapsed, 1) if elapsed > 0 else None,
        "digest": digest.hexdigest(),
        "backend_id": backend.backend_id,
        "threshold": threshold,
    }
    log.info("classified %d records in %.2fs", total, elapsed)
    return summary


def iter_predictions(corpus: Corpus):
    """Yield prediction records in the same deterministic order as iter_records."""
    for country, month in corpus.partition_keys():
        path = corpus.root / country / f"{month}.predictions.jsonl"
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    yield json.loads(line)
