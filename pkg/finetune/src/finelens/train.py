"""Two-stage training: binary abuse head first, then the ten-label head.

Evaluation reports are produced by the pipeline's `abuselens evaluate`
command (predictions and gold labels are exchanged as JSONL files), so both
packages score with one implementation.
"""

from __future__ import annotations

import json
import logging
import math
import random
import subprocess
import tempfile
from pathlib import Path

import torch
from torch import nn

from .config import TrainConfig
from .data import (
    HINDUPHOBIC,
    POSITIVE_NEUTRAL,
    SENTIMENT_LABELS,
    DatasetError,
    Example,
    Tokenizer,
    load_labeled_records,
    load_sentiment_csv,
)
from .model import MiniEncoderClassifier, build_model

log = logging.getLogger(__name__)

STAGE_BINARY = "binary"
STAGE_SENTIMENT = "sentiment"


class TrainingError(RuntimeError):
    pass


class StageOrderError(TrainingError):
    """Sentiment fine-tuning attempted without a binary-stage checkpoint."""


def _split(examples: list[Example], ratio: float, seed: int):
    order = list(range(len(examples)))
    random.Random(seed).shuffle(order)
    cut = max(1, int(len(examples) * ratio))
    train = [examples[i] for i in order[:cut]]
    val = [examples[i] for i in order[cut:]]
    return train, val


def _encode_batch(batch: list[Example], tokenizer: Tokenizer):
    ids, masks = [], []
    for ex in batch:
        i, m = tokenizer.encode(ex.text)
        ids.append(i)
        masks.append(m)
    ids_t = torch.tensor(ids, dtype=torch.long)
    mask_t = torch.tensor(masks, dtype=torch.long)
    return ids_t, mask_t, torch.zeros_like(ids_t)


def _batches(examples, batch_size, seed, epoch):
    order = list(range(len(examples)))
    random.Random((seed, epoch).__hash__()).shuffle(order)
    for start in range(0, len(order), batch_size):
        yield [examples[i] for i in order[start:start + batch_size]]


def _predict(model, examples, tokenizer, batch_size=32):
    model.eval()
    binary_probs, sentiment_probs = [], []
    with torch.no_grad():
        for start in range(0, len(examples), batch_size):
            batch = examples[start:start + batch_size]
            b, s = model(*_encode_batch(batch, tokenizer))
            binary_probs.extend(torch.sigmoid(b).tolist())
            sentiment_probs.extend(torch.sigmoid(s).tolist())
    return binary_probs, sentiment_probs


def evaluate_with_pipeline(examples, binary_probs, sentiment_probs) -> dict:
    """Score through the pipeline's `evaluate` command (shared definitions)."""
    with tempfile.TemporaryDirectory() as tmp:
        pred_path = Path(tmp) / "pred.jsonl"
        gold_path = Path(tmp) / "gold.jsonl"
        with open(pred_path, "w", encoding="utf-8") as pf, \
                open(gold_path, "w", encoding="utf-8") as gf:
            for ex, bp, sp in zip(examples, binary_probs, sentiment_probs):
                label = HINDUPHOBIC if bp >= 0.5 else POSITIVE_NEUTRAL
                pf.write(json.dumps({
                    "id": ex.id, "binary": label,
                    "confidence": bp if bp >= 0.5 else 1.0 - bp,
                    "sentiment_scores": sp,
                }) + "\n")
                gf.write(json.dumps({
                    "id": ex.id,
                    "binary_label": ex.binary_label or POSITIVE_NEUTRAL,
                    "sentiment_labels": list(ex.sentiment_labels),
                }) + "\n")
        try:
            out = subprocess.run(
                ["abuselens", "evaluate", "--pred", str(pred_path),
                 "--gold", str(gold_path)],
                capture_output=True, text=True, check=True,
            )
        except FileNotFoundError as exc:
            raise TrainingError(
                "the `abuselens` command is required for metric reports"
            ) from exc
        except subprocess.CalledProcessError as exc:
            raise TrainingError(f"evaluation failed: {exc.stderr}") from exc
    return json.loads(out.stdout)


def _accuracy(examples, binary_probs) -> float:
    correct = sum(
        1 for ex, p in zip(examples, binary_probs)
        if (p >= 0.5) == (ex.binary_label == HINDUPHOBIC)
    )
    return correct / len(examples)


def finetune_binary(dataset_path, config: TrainConfig, out_dir) -> dict:
    """Train the binary head; returns checkpoint path plus metric report."""
    examples = load_labeled_records(dataset_path)
    classes = {ex.binary_label for ex in examples}
    if classes != {HINDUPHOBIC, POSITIVE_NEUTRAL}:
        raise DatasetError(
            f"binary training needs both classes, got {sorted(c for c in classes if c)}")
    train, val = _split(examples, config.split_ratio, config.seed)
    tokenizer = Tokenizer.fit([ex.text for ex in train], config.max_length)
    model = build_model(len(tokenizer), config)
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate,
                                  weight_decay=config.weight_decay)
    loss_fn = nn.BCEWithLogitsLoss()

    torch.manual_seed(config.seed)
    for epoch in range(config.epochs):
        model.train()
        total = 0.0
        for batch in _batches(train, config.batch_size, config.seed, epoch):
            ids, mask, type_ids = _encode_batch(batch, tokenizer)
            targets = torch.tensor([ex.binary_target for ex in batch])
            binary_logit, _ = model(ids, mask, type_ids)
            loss = loss_fn(binary_logit, targets)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += float(loss.detach())
        log.info("binary epoch %d loss %.4f", epoch + 1, total)

    train_probs, _ = _predict(model, train, tokenizer)
    result = {
        "train_accuracy": _accuracy(train, train_probs),
        "n_train": len(train),
        "n_val": len(val),
    }
    if val:
        val_probs, val_sent = _predict(model, val, tokenizer)
        result["val_accuracy"] = _accuracy(val, val_probs)
        result["report"] = evaluate_with_pipeline(val, val_probs, val_sent)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint_path = out_dir / "binary.ckpt"
    torch.save({
        "stage": STAGE_BINARY,
        "stages_completed": [STAGE_BINARY],
        "state_dict": model.state_dict(),
        "vocab": tokenizer.vocab,
        "config": config.as_dict(),
        "sentiment_labels": list(SENTIMENT_LABELS),
    }, checkpoint_path)
    result["checkpoint"] = str(checkpoint_path)
    return result


def finetune_binary_runs(dataset_path, config: TrainConfig, out_dir,
                         seeds) -> dict:
    """Repeat binary training over seeds; mean ± sample std per metric."""
    accuracies = []
    runs = []
    for seed in seeds:
        cfg = TrainConfig(**{**config.as_dict(), "seed": seed})
        result = finetune_binary(dataset_path, cfg, Path(out_dir) / f"seed{seed}")
        runs.append(result)
        accuracies.append(result["train_accuracy"])
    n = len(accuracies)
    mean = sum(accuracies) / n
    std = (math.sqrt(sum((a - mean) ** 2 for a in accuracies) / (n - 1))
           if n > 1 else None)
    return {"runs": runs, "train_accuracy_mean": mean,
            "train_accuracy_std": std, "n_runs": n}


def load_checkpoint(path) -> dict:
    checkpoint = torch.load(path, map_location="cpu", weights_only=False)
    for key in ("stage", "state_dict", "vocab", "config"):
        if key not in checkpoint:
            raise TrainingError(f"malformed checkpoint: missing {key!r}")
    return checkpoint


def _rebuild(checkpoint: dict) -> tuple[MiniEncoderClassifier, Tokenizer, TrainConfig]:
    config = TrainConfig(**checkpoint["config"])
    tokenizer = Tokenizer(checkpoint["vocab"], config.max_length)
    model = build_model(len(tokenizer), config)
    model.load_state_dict(checkpoint["state_dict"])
    return model, tokenizer, config


def finetune_sentiment(checkpoint_path, dataset_path, config: TrainConfig | None,
                       out_dir) -> dict:
    """Train the ten-label head on top of a binary-stage checkpoint."""
    checkpoint = load_checkpoint(checkpoint_path)
    if STAGE_BINARY not in checkpoint.get("stages_completed", []):
        raise StageOrderError(
            "sentiment fine-tuning requires a binary-stage checkpoint first")
    if tuple(checkpoint.get("sentiment_labels", ())) != SENTIMENT_LABELS:
        raise TrainingError("checkpoint sentiment label order does not match")
    model, tokenizer, ckpt_config = _rebuild(checkpoint)
    config = config or ckpt_config

    examples = (load_sentiment_csv(dataset_path)
                if str(dataset_path).endswith(".csv")
                else load_labeled_records(dataset_path))
    train, val = _split(examples, config.split_ratio, config.seed)

    if config.freeze_binary_head:
        for p in model.binary_head.parameters():
            p.requires_grad_(False)
    optimizer = torch.optim.AdamW(
        [p for p in model.parameters() if p.requires_grad],
        lr=config.learning_rate, weight_decay=config.weight_decay)
    loss_fn = nn.BCEWithLogitsLoss()

    torch.manual_seed(config.seed + 1)
    for epoch in range(config.epochs):
        model.train()
        total = 0.0
        for batch in _batches(train, config.batch_size, config.seed, epoch):
            ids, mask, type_ids = _encode_batch(batch, tokenizer)
            targets = torch.tensor([ex.sentiment_targets() for ex in batch])
            _, sentiment_logits = model(ids, mask, type_ids)
            loss = loss_fn(sentiment_logits, targets)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += float(loss.detach())
        log.info("sentiment epoch %d loss %.4f", epoch + 1, total)

    eval_set = val or train
    bin_probs, sent_probs = _predict(model, eval_set, tokenizer)
    result = {
        "n_train": len(train),
        "n_val": len(val),
        "report": evaluate_with_pipeline(eval_set, bin_probs, sent_probs),
    }

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint_path = out_dir / "sentiment.ckpt"
    torch.save({
        "stage": STAGE_SENTIMENT,
        "stages_completed": [STAGE_BINARY, STAGE_SENTIMENT],
        "state_dict": model.state_dict(),
        "vocab": tokenizer.vocab,
        "config": config.as_dict(),
        "sentiment_labels": list(SENTIMENT_LABELS),
    }, checkpoint_path)
    result["checkpoint"] = str(checkpoint_path)
    return result
