"""Export a trained checkpoint as a portable model file + metadata sidecar.

The file is a traced TorchScript module whose outputs are one binary logit
and ten sentiment logits; the sidecar declares the tokenizer, label order,
output arity, and stage provenance. Export refuses to publish a file whose
traced outputs diverge from the eager model.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import SENTIMENT_LABELS, Tokenizer
from .train import STAGE_SENTIMENT, TrainingError, _rebuild, load_checkpoint

PARITY_TOLERANCE = 1e-6


class ExportError(RuntimeError):
    pass


def export_portable(checkpoint_path, out_path) -> dict:
    checkpoint = load_checkpoint(checkpoint_path)
    if STAGE_SENTIMENT not in checkpoint.get("stages_completed", []):
        raise ExportError("export requires both heads trained "
                          "(binary and sentiment stages)")
    model, tokenizer, config = _rebuild(checkpoint)
    model.eval()

    example = _example_inputs(tokenizer, config.max_length)
    with torch.no_grad():
        traced = torch.jit.trace(model, example)
        eager_b, eager_s = model(*example)
        traced_b, traced_s = traced(*example)
    gap = max(float((eager_b - traced_b).abs().max()),
              float((eager_s - traced_s).abs().max()))
    if gap > PARITY_TOLERANCE:
        raise ExportError(
            f"traced model diverges from eager by {gap:.2e}; refusing to publish")

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    traced.save(str(out_path))
    meta = {
        "sentiment_labels": list(SENTIMENT_LABELS),
        "outputs": {"binary_logit": 1,
                    "sentiment_logits": len(SENTIMENT_LABELS)},
        "tokenizer": tokenizer.as_metadata(),
        "stage_provenance": checkpoint["stages_completed"],
        "encoder": config.encoder_id,
    }
    meta_path = out_path.with_suffix(out_path.suffix + ".meta.json")
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
    return {"model": str(out_path), "metadata": str(meta_path),
            "trace_parity": gap}


def _example_inputs(tokenizer: Tokenizer, max_length: int):
    ids, mask = tokenizer.encode("sample text for tracing the exported graph")
    ids_t = torch.tensor([ids], dtype=torch.long)
    mask_t = torch.tensor([mask], dtype=torch.long)
    return ids_t, mask_t, torch.zeros_like(ids_t)
