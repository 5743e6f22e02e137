"""Two-stage fine-tuning harness for the abuse/sentiment classifier."""

from .config import TrainConfig
from .data import (
    BINARY_LABELS,
    SENTIMENT_LABELS,
    DatasetError,
    Example,
    Tokenizer,
    load_labeled_records,
    load_sentiment_csv,
)
from .export import ExportError, export_portable
from .model import MiniEncoderClassifier, build_model
from .train import (
    StageOrderError,
    TrainingError,
    finetune_binary,
    finetune_binary_runs,
    finetune_sentiment,
    load_checkpoint,
)

__version__ = "0.1.0"

__all__ = [
    "TrainConfig",
    "BINARY_LABELS",
    "SENTIMENT_LABELS",
    "DatasetError",
    "Example",
    "Tokenizer",
    "load_labeled_records",
    "load_sentiment_csv",
    "ExportError",
    "export_portable",
    "MiniEncoderClassifier",
    "build_model",
    "StageOrderError",
    "TrainingError",
    "finetune_binary",
    "finetune_binary_runs",
    "finetune_sentiment",
    "load_checkpoint",
]
