"""LOTA: low-bit patch features for AI-generated-image detection.

The pipeline decomposes 8-bit RGB images into bit-planes, recombines the
least significant planes into a normalized noise image, and selects the
patch with the highest multi-directional gradient score. The hot kernels
run through a compiled extension when built, with a numpy fallback.
"""

from ._kernels import backend_name, set_backend
from .bitplane import BitPlaneStack, LowBitImage, compose_low_bits, decompose, recompose_full
from .metrics import compute_acc, compute_ap, read_scores, write_scores
from .noisegen import NoiseImage, NormMode, noise_from_image, normalize, scale_minmax, threshold_binary
from .patchsel import (
    KERNELS,
    ScoredPatch,
    gradient_score,
    partition,
    score_all,
    score_patches,
    select_max,
    select_strategy,
)
from .pipeline import (
    DecodeError,
    DegradationError,
    ExtractionRecord,
    PipelineConfig,
    StageTimings,
    degrade_gaussian,
    degrade_jpeg,
    extract,
    load_image,
    prepare_nbc_patch,
)

__version__ = "0.1.0"

__all__ = [
    "BitPlaneStack",
    "DecodeError",
    "DegradationError",
    "ExtractionRecord",
    "KERNELS",
    "LowBitImage",
    "NoiseImage",
    "NormMode",
    "PipelineConfig",
    "ScoredPatch",
    "StageTimings",
    "backend_name",
    "compose_low_bits",
    "compute_acc",
    "compute_ap",
    "decompose",
    "degrade_gaussian",
    "degrade_jpeg",
    "extract",
    "gradient_score",
    "load_image",
    "noise_from_image",
    "normalize",
    "partition",
    "prepare_nbc_patch",
    "read_scores",
    "recompose_full",
    "scale_minmax",
    "score_all",
    "score_patches",
    "select_max",
    "select_strategy",
    "set_backend",
    "threshold_binary",
    "write_scores",
]
