"""Shared fixtures: synthetic training sets and session-scoped trained runs.

Training is slow relative to the rest of the suite, so the two training
runs (binary on the separable set, binary+sentiment on the memorization
micro-set) are performed once per session and shared.
"""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make traingen importable

from traingen import make_micro_rows, make_separable_rows, write_jsonl  # noqa: E402

from finelens import TrainConfig, finetune_binary, finetune_sentiment  # noqa: E402
from finelens.export import export_portable  # noqa: E402


@pytest.fixture(scope="session")
def separable_dataset(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("separable")
    return write_jsonl(root / "train.jsonl", make_separable_rows())


@pytest.fixture(scope="session")
def micro_dataset(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("micro")
    return write_jsonl(root / "train.jsonl", make_micro_rows())


@pytest.fixture(scope="session")
def binary_run(separable_dataset, tmp_path_factory) -> dict:
    """One binary training run at default hyperparameters."""
    out = tmp_path_factory.mktemp("binary-run")
    return finetune_binary(separable_dataset, TrainConfig(), out)


@pytest.fixture(scope="session")
def two_stage_run(micro_dataset, tmp_path_factory) -> dict:
    """Binary then sentiment training on the memorization micro-set."""
    out = tmp_path_factory.mktemp("two-stage")
    config = TrainConfig(split_ratio=0.9)
    binary = finetune_binary(micro_dataset, config, out / "binary")
    sentiment = finetune_sentiment(binary["checkpoint"], micro_dataset,
                                   config, out / "sentiment")
    return {"binary": binary, "sentiment": sentiment}


@pytest.fixture(scope="session")
def exported_model(two_stage_run, tmp_path_factory) -> dict:
    out = tmp_path_factory.mktemp("export")
    return export_portable(two_stage_run["sentiment"]["checkpoint"],
                           out / "model.pt")
