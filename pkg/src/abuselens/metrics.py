"""Binary and multi-label evaluation metrics with mean/std run aggregation.

Multi-label metrics follow the usual definitions: Hamming loss over label
cells, sample-wise Jaccard (both-empty counts as 1.0), LRAP with
averaged-rank tie handling, and macro/micro F1.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .labels import BINARY_LABELS

log = logging.getLogger(__name__)


class MetricsError(ValueError):
    pass


@dataclass
class BinaryMetrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    per_class: dict

    def as_dict(self) -> dict:
        return {
            "Accuracy": self.accuracy,
            "F1": self.f1,
            "Precision": self.precision,
            "Recall": self.recall,
            "per_class": self.per_class,
        }


@dataclass
class MultiLabelMetrics:
    hamming_loss: float
    jaccard_samples: float
    lrap: float
    f1_macro: float
    f1_micro: float

    def as_dict(self) -> dict:
        return {
            "Hamming Loss": self.hamming_loss,
            "Jaccard Score": self.jaccard_samples,
            "Label Ranking Average Precision (LRAP)": self.lrap,
            "F1 Score (Macro)": self.f1_macro,
            "F1 Score (Micro)": self.f1_micro,
        }


def binary_metrics(preds, golds) -> BinaryMetrics:
    """Accuracy plus macro-averaged precision/recall over the two classes.

    The reported f1 is the harmonic mean of macro precision and macro recall;
    per-class values are included so micro/weighted variants can be rebuilt.
    """
    preds = list(preds)
    golds = list(golds)
    if len(preds) != len(golds):
        raise MetricsError(f"length mismatch: {len(preds)} preds vs {len(golds)} golds")
    if not golds:
        raise MetricsError("empty inputs")

    accuracy = sum(p == g for p, g in zip(preds, golds)) / len(golds)
    per_class = {}
    precisions, recalls = [], []
    for cls in BINARY_LABELS:
        tp = sum(1 for p, g in zip(preds, golds) if p == cls and g == cls)
        fp = sum(1 for p, g in zip(preds, golds) if p == cls and g != cls)
        fn = sum(1 for p, g in zip(preds, golds) if p != cls and g == cls)
        if cls not in golds:
            warnings.warn(f"class {cls!r} absent from golds; its terms default to 0")
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[cls] = {"precision": precision, "recall": recall, "f1": f1,
                          "support": golds.count(cls)}
        precisions.append(precision)
        recalls.append(recall)
    p_macro = sum(precisions) / len(precisions)
    r_macro = sum(recalls) / len(recalls)
    f1 = 2 * p_macro * r_macro / (p_macro + r_macro) if p_macro + r_macro else 0.0
    return BinaryMetrics(accuracy=accuracy, precision=p_macro, recall=r_macro,
                         f1=f1, per_class=per_class)


def _as_bool_matrix(y, name: str) -> np.ndarray:
    arr = np.asarray(y)
    if arr.ndim != 2:
        raise MetricsError(f"{name} must be 2-dimensional")
    return arr.astype(bool)


def _check_shapes(y_true: np.ndarray, y_pred: np.ndarray) -> None:
    if y_true.shape != y_pred.shape:
        raise MetricsError(f"shape mismatch: {y_true.shape} vs {y_pred.shape}")


def hamming_loss(y_true, y_pred) -> float:
    """Fraction of label cells predicted incorrectly."""
    t = _as_bool_matrix(y_true, "y_true")
    p = _as_bool_matrix(y_pred, "y_pred")
    _check_shapes(t, p)
    return float(np.mean(t != p))


def jaccard_samples(y_true, y_pred) -> float:
    """Mean over samples of |pred & true| / |pred | true|; both-empty is 1.0."""
    t = _as_bool_matrix(y_true, "y_true")
    p = _as_bool_matrix(y_pred, "y_pred")
    _check_shapes(t, p)
    inter = (t & p).sum(axis=1)
    union = (t | p).sum(axis=1)
    scores = np.where(union == 0, 1.0, inter / np.maximum(union, 1))
    return float(scores.mean())


def lrap(y_true, y_score) -> float:
    """Label ranking average precision.

    Per sample: mean over true labels λ of |{true λ' : rank(λ') ≤ rank(λ)}|
    divided by rank(λ), with descending-score ranks. Ties count via
    score ≥ comparisons (equivalent to averaged ranks when scores are
    distinct), which keeps the value in [0,1] even under ties. Samples
    with no true label are skipped with a warning.
    """
    t = _as_bool_matrix(y_true, "y_true")
    s = np.asarray(y_score, dtype=float)
    _check_shapes(t, s)
    if np.isnan(s).any():
        raise MetricsError("NaN in scores")
    totals = []
    skipped = 0
    for row_true, row_score in zip(t, s):
        true_idx = np.flatnonzero(row_true)
        if len(true_idx) == 0:
            skipped += 1
            continue
        sample = 0.0
        for lam in true_idx:
            at_or_above = row_score >= row_score[lam]
            rank = int(at_or_above.sum())
            true_at_or_above = int((at_or_above & row_true).sum())
            sample += true_at_or_above / rank
        totals.append(sample / len(true_idx))
    if skipped:
        warnings.warn(f"lrap: skipped {skipped} samples with no true label")
    if not totals:
        raise MetricsError("lrap: no samples with true labels")
    return float(np.mean(totals))


def f1_multilabel(y_true, y_pred, average: str = "macro") -> float:
    """Macro (unweighted per-label mean) or micro (global counts) F1."""
    t = _as_bool_matrix(y_true, "y_true")
    p = _as_bool_matrix(y_pred, "y_pred")
    _check_shapes(t, p)
    if average == "micro":
        tp = int((t & p).sum())
        fp = int((~t & p).sum())
        fn = int((t & ~p).sum())
        denom = 2 * tp + fp + fn
        return 2 * tp / denom if denom else 0.0
    if average == "macro":
        f1s = []
        for j in range(t.shape[1]):
            tp = int((t[:, j] & p[:, j]).sum())
            fp = int((~t[:, j] & p[:, j]).sum())
            fn = int((t[:, j] & ~p[:, j]).sum())
            if t[:, j].sum() == 0 and p[:, j].sum() == 0:
                warnings.warn(f"label column {j} absent from truth and prediction; F1 set to 0")
            denom = 2 * tp + fp + fn
            f1s.append(2 * tp / denom if denom else 0.0)
        return float(np.mean(f1s))
    raise MetricsError(f"unknown average: {average}")


def multilabel_metrics(y_true, y_pred, y_score=None) -> MultiLabelMetrics:
    return MultiLabelMetrics(
        hamming_loss=hamming_loss(y_true, y_pred),
        jaccard_samples=jaccard_samples(y_true, y_pred),
        lrap=lrap(y_true, y_score if y_score is not None else np.asarray(y_pred, dtype=float)),
        f1_macro=f1_multilabel(y_true, y_pred, "macro"),
        f1_micro=f1_multilabel(y_true, y_pred, "micro"),
    )


@dataclass
class RunAggregate:
    n: int
    mean: dict[str, float]
    std: dict[str, float | None]

    def as_dict(self) -> dict:
        return {"n_runs": self.n, "mean": self.mean, "std": self.std}


def aggregate_runs(metrics: list[BinaryMetrics]) -> RunAggregate:
    """Per-field mean and sample std (N-1 denominator) across repeated runs."""
    if not metrics:
        raise MetricsError("empty metrics list")
    fields = ("accuracy", "precision", "recall", "f1")
    n = len(metrics)
    mean = {}
    std = {}
    for name in fields:
        values = [getattr(m, name) for m in metrics]
        mu = sum(values) / n
        mean[name] = mu
        if n >= 2:
            std[name] = math.sqrt(sum((v - mu) ** 2 for v in values) / (n - 1))
        else:
            std[name] = None  # undefined for a single run
    return RunAggregate(n=n, mean=mean, std=std)
