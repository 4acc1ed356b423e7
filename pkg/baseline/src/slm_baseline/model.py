"""A compact transformer encoder with a CLS classification head."""

from __future__ import annotations

import torch
from torch import nn

from .vocab import PAD


class EncoderClassifier(nn.Module):
    def __init__(
        self,
        vocab_size: int,
        max_tokens: int = 512,
        d_model: int = 64,
        n_heads: int = 4,
        n_layers: int = 2,
        ff_dim: int = 128,
        dropout: float = 0.1,
        n_classes: int = 2,
    ):
        super().__init__()
        self.token_embedding = nn.Embedding(vocab_size, d_model, padding_idx=PAD)
        self.position_embedding = nn.Embedding(max_tokens, d_model)
        layer = nn.TransformerEncoderLayer(
            d_model=d_model,
            nhead=n_heads,
            dim_feedforward=ff_dim,
            dropout=dropout,
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=n_layers)
        self.norm = nn.LayerNorm(d_model)
        self.head = nn.Linear(d_model, n_classes)
        self.max_tokens = max_tokens

    def forward(self, token_ids: torch.Tensor) -> torch.Tensor:
        positions = torch.arange(token_ids.size(1), device=token_ids.device)
        hidden = self.token_embedding(token_ids) + self.position_embedding(positions)
        padding_mask = token_ids.eq(PAD)
        encoded = self.encoder(hidden, src_key_padding_mask=padding_mask)
        cls_state = self.norm(encoded[:, 0])
        return self.head(cls_state)
