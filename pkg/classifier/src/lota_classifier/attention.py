"""Noise-guided attention: scaled dot-product attention with an additive
logit bias derived from the selected noise patch.

With a zero bias this reduces exactly to standard attention; the bias is
shared across heads and broadcast over the attention logits.
"""

from __future__ import annotations

import math

import torch
from torch import nn


def attention_forward(
    q: torch.Tensor,
    k: torch.Tensor,
    v: torch.Tensor,
    bias: torch.Tensor | None = None,
    d_k: int | None = None,
) -> torch.Tensor:
    """softmax(q k^T / sqrt(d_k) + bias) v over the last two dimensions.

    ``q`` is (..., n_q, d), ``k``/``v`` are (..., n_k, d) / (..., n_k, d_v);
    ``bias`` must broadcast against the (..., n_q, n_k) logits.
    """
    if d_k is None:
        d_k = q.shape[-1]
    if d_k <= 0:
        raise ValueError(f"d_k must be positive, got {d_k}")
    if q.shape[-1] != k.shape[-1]:
        raise ValueError(f"query dim {q.shape[-1]} != key dim {k.shape[-1]}")
    if k.shape[-2] != v.shape[-2]:
        raise ValueError(f"key count {k.shape[-2]} != value count {v.shape[-2]}")
    logits = q @ k.transpose(-2, -1) / math.sqrt(d_k)
    if bias is not None:
        logits = logits + bias
    return torch.softmax(logits, dim=-1) @ v


class NoiseGuidedAttention(nn.Module):
    """Multi-head attention whose logits carry a shared additive bias.

    Queries and the key/value context may come from different sources (here:
    pooled encoder features vs. the flattened spatial feature map); the bias
    is one value per key, broadcast over heads and query positions.
    """

    def __init__(self, in_dim: int, embed_dim: int = 256, num_heads: int = 8):
        super().__init__()
        if embed_dim % num_heads:
            raise ValueError(f"embed_dim {embed_dim} not divisible by num_heads {num_heads}")
        self.num_heads = num_heads
        self.head_dim = embed_dim // num_heads
        self.q_proj = nn.Linear(in_dim, embed_dim)
        self.k_proj = nn.Linear(in_dim, embed_dim)
        self.v_proj = nn.Linear(in_dim, embed_dim)
        self.out_proj = nn.Linear(embed_dim, embed_dim)

    def _split(self, x: torch.Tensor) -> torch.Tensor:
        batch, tokens, _ = x.shape
        return x.view(batch, tokens, self.num_heads, self.head_dim).transpose(1, 2)

    def forward(
        self,
        query: torch.Tensor,    # (B, n_q, in_dim)
        context: torch.Tensor,  # (B, n_k, in_dim)
        bias: torch.Tensor | None = None,  # (B, n_k)
    ) -> torch.Tensor:
        q = self._split(self.q_proj(query))
        k = self._split(self.k_proj(context))
        v = self._split(self.v_proj(context))
        logit_bias = None
        if bias is not None:
            if bias.shape != (context.shape[0], context.shape[1]):
                raise ValueError(f"bias shape {tuple(bias.shape)} does not match context tokens")
            logit_bias = bias[:, None, None, :]
        out = attention_forward(q, k, v, logit_bias, self.head_dim)
        batch, _, n_q, _ = out.shape
        merged = out.transpose(1, 2).reshape(batch, n_q, self.num_heads * self.head_dim)
        return self.out_proj(merged)
