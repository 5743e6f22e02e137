"""Training configuration with fixed hyperparameter defaults."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass


@dataclass
class TrainConfig:
    encoder_id: str = "miniature"  # desk-scale built-in encoder
    dropout: float = 0.2
    learning_rate: float = 2e-5
    batch_size: int = 8
    epochs: int = 10
    weight_decay: float = 0.01
    seed: int = 0
    split_ratio: float = 0.8
    # miniature-encoder architecture knobs
    d_model: int = 256
    n_layers: int = 2
    n_heads: int = 4
    max_length: int = 64
    freeze_binary_head: bool = False  # during the sentiment stage

    def __post_init__(self):
        if not 0.0 < self.split_ratio < 1.0:
            raise ValueError(f"split_ratio must be in (0,1), got {self.split_ratio}")
        if self.batch_size < 1 or self.epochs < 1:
            raise ValueError("batch_size and epochs must be positive")
        if self.d_model % self.n_heads:
            raise ValueError("d_model must be divisible by n_heads")

    @classmethod
    def from_file(cls, path) -> "TrainConfig":
        with open(path, encoding="utf-8") as fh:
            return cls(**json.load(fh))

    def as_dict(self) -> dict:
        return asdict(self)
