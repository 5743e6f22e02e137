"""Miniature transformer encoder with a binary head and a ten-label head.

The forward signature (input ids, attention mask, token type ids) and the
output pair (one binary logit, ten sentiment logits) are the consumer
contract for exported model files.
"""

from __future__ import annotations

import torch
from torch import nn

from .data import SENTIMENT_LABELS


class MiniEncoderClassifier(nn.Module):
    def __init__(self, vocab_size: int, d_model: int = 256, n_layers: int = 2,
                 n_heads: int = 4, max_length: int = 64, dropout: float = 0.2):
        super().__init__()
        self.max_length = max_length
        self.embed = nn.Embedding(vocab_size, d_model, padding_idx=0)
        self.pos = nn.Embedding(max_length, d_model)
        self.type_embed = nn.Embedding(2, d_model)
        layer = nn.TransformerEncoderLayer(
            d_model=d_model, nhead=n_heads, dim_feedforward=d_model * 2,
            dropout=dropout, batch_first=True, norm_first=True,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=n_layers)
        self.norm = nn.LayerNorm(d_model)
        self.dropout = nn.Dropout(dropout)
        self.binary_head = nn.Linear(d_model, 1)
        self.sentiment_head = nn.Linear(d_model, len(SENTIMENT_LABELS))
        # zero-initialized heads: early optimizer steps all push in the
        # gradient's (consistent) direction, which matters at tiny step sizes
        nn.init.zeros_(self.binary_head.weight)
        nn.init.zeros_(self.binary_head.bias)
        nn.init.zeros_(self.sentiment_head.weight)
        nn.init.zeros_(self.sentiment_head.bias)

    def forward(self, ids: torch.Tensor, mask: torch.Tensor,
                type_ids: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        positions = torch.arange(ids.shape[1], device=ids.device)
        x = self.embed(ids) + self.pos(positions) + self.type_embed(type_ids)
        pad_mask = mask == 0
        x = self.encoder(x, src_key_padding_mask=pad_mask)
        # masked mean pooling
        m = mask.unsqueeze(-1).to(x.dtype)
        pooled = (x * m).sum(dim=1) / m.sum(dim=1).clamp(min=1.0)
        pooled = self.dropout(self.norm(pooled))
        binary = self.binary_head(pooled).squeeze(-1)
        sentiments = self.sentiment_head(pooled)
        return binary, sentiments


def build_model(vocab_size: int, config) -> MiniEncoderClassifier:
    torch.manual_seed(config.seed)
    return MiniEncoderClassifier(
        vocab_size=vocab_size,
        d_model=config.d_model,
        n_layers=config.n_layers,
        n_heads=config.n_heads,
        max_length=config.max_length,
        dropout=config.dropout,
    )
