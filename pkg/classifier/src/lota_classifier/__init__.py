"""Classification heads for extracted noise patches.

Consumes the extraction CLI's file interfaces (manifest.json + patch PNGs)
and emits score CSVs its ``metrics`` verb understands.
"""

from .attention import NoiseGuidedAttention, attention_forward
from .evaluate import evaluate
from .models import BACKBONES, NbcModel, NgcModel, TinyEncoder
from .train import MODEL_KINDS, TrainConfig, train

__version__ = "0.1.0"

__all__ = [
    "BACKBONES",
    "MODEL_KINDS",
    "NbcModel",
    "NgcModel",
    "NoiseGuidedAttention",
    "TinyEncoder",
    "TrainConfig",
    "attention_forward",
    "evaluate",
    "train",
]
