"""The two classification heads over extracted noise patches.

NbcModel consumes only the upsampled noise patch through a convolutional
encoder. NgcModel encodes the raw image and attends over its spatial
features with the flattened noise patch injected as an additive logit bias.
Both end in a single-logit affine layer; probabilities are its sigmoid.
"""

from __future__ import annotations

import warnings

import torch
from torch import nn
from torchvision import models as tv_models

from .attention import NoiseGuidedAttention

BACKBONES = ("resnet50", "resnet18", "tiny")


class TinyEncoder(nn.Module):
    """Compact stride-32 conv trunk for desk-scale runs on CPU."""

    out_channels = 128

    def __init__(self):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(3, 16, 5, stride=4, padding=2),
            nn.BatchNorm2d(16),
            nn.ReLU(inplace=True),
            nn.Conv2d(16, 32, 3, stride=2, padding=1),
            nn.BatchNorm2d(32),
            nn.ReLU(inplace=True),
            nn.Conv2d(32, 64, 3, stride=2, padding=1),
            nn.BatchNorm2d(64),
            nn.ReLU(inplace=True),
            nn.Conv2d(64, 128, 3, stride=2, padding=1),
            nn.BatchNorm2d(128),
            nn.ReLU(inplace=True),
            nn.Conv2d(128, 128, 3, stride=1, padding=1),
            nn.BatchNorm2d(128),
            nn.ReLU(inplace=True),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.features(x)


def build_encoder(backbone: str, pretrained: bool) -> tuple[nn.Module, int]:
    """Feature-map trunk (output stride 32) and its channel count."""
    if backbone == "tiny":
        return TinyEncoder(), TinyEncoder.out_channels
    if backbone not in BACKBONES:
        raise ValueError(f"unknown backbone {backbone!r}, expected one of {BACKBONES}")
    factory = getattr(tv_models, backbone)
    weights = {
        "resnet50": tv_models.ResNet50_Weights.IMAGENET1K_V2,
        "resnet18": tv_models.ResNet18_Weights.IMAGENET1K_V1,
    }[backbone]
    try:
        net = factory(weights=weights if pretrained else None)
    except Exception as exc:  # offline environment: fall back to random init
        warnings.warn(f"pretrained weights unavailable ({exc}); using random initialization")
        net = factory(weights=None)
    channels = net.fc.in_features
    trunk = nn.Sequential(*list(net.children())[:-2])  # drop avgpool + fc
    return trunk, channels


class NbcModel(nn.Module):
    """Noise-based classifier: conv encoder over the upsampled patch."""

    def __init__(self, backbone: str = "resnet50", pretrained: bool = True):
        super().__init__()
        self.backbone = backbone
        self.encoder, channels = build_encoder(backbone, pretrained)
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.fc = nn.Linear(channels, 1)

    def forward(self, patch: torch.Tensor) -> torch.Tensor:
        features = self.pool(self.encoder(patch)).flatten(1)
        return self.fc(features)

    def predict_proba(self, patch: torch.Tensor) -> torch.Tensor:
        return torch.sigmoid(self.forward(patch))


class NgcModel(nn.Module):
    """Noise-guided classifier: attention over raw-image features.

    The query comes from the spatially pooled feature map, keys and values
    from the flattened spatial tokens, and the flattened noise patch is
    projected to one additive logit-bias value per token.
    """

    def __init__(
        self,
        backbone: str = "resnet50",
        pretrained: bool = True,
        patch_size: int = 32,
        input_size: int = 256,
        embed_dim: int = 256,
        num_heads: int = 8,
    ):
        super().__init__()
        self.backbone = backbone
        self.patch_size = patch_size
        self.encoder, channels = build_encoder(backbone, pretrained)
        self.encoder.eval()  # keep batch-norm stats untouched by the shape probe
        with torch.no_grad():
            probe = self.encoder(torch.zeros(1, 3, input_size, input_size))
        self.encoder.train()
        self.tokens = probe.shape[2] * probe.shape[3]
        self.bias_proj = nn.Linear(3 * patch_size * patch_size, self.tokens)
        self.attention = NoiseGuidedAttention(channels, embed_dim=embed_dim, num_heads=num_heads)
        self.fc = nn.Linear(embed_dim, 1)

    def forward(self, raw: torch.Tensor, patch: torch.Tensor) -> torch.Tensor:
        features = self.encoder(raw)  # (B, C, h, w)
        batch, channels = features.shape[:2]
        context = features.flatten(2).transpose(1, 2)  # (B, h*w, C)
        if context.shape[1] != self.tokens:
            raise ValueError(
                f"expected {self.tokens} feature tokens, got {context.shape[1]}; "
                "raw input resolution does not match the model"
            )
        query = features.mean(dim=(2, 3)).view(batch, 1, channels)
        bias = self.bias_proj(patch.flatten(1))
        attended = self.attention(query, context, bias)  # (B, 1, embed_dim)
        return self.fc(attended.squeeze(1))

    def predict_proba(self, raw: torch.Tensor, patch: torch.Tensor) -> torch.Tensor:
        return torch.sigmoid(self.forward(raw, patch))
