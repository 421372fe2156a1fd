"""Normalization of low-bit images into noise maps.

Low-bit values live in [0, 2**m - 1], far too dark to be useful features.
Two normalizations are supported: per-channel min-max scaling to [0, 255],
and binary thresholding (any nonzero value becomes 255). Thresholding is
the pipeline default.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .bitplane import LowBitImage, ensure_rgb8


class NormMode(str, Enum):
    THRESHOLD = "threshold"
    SCALE = "scale"


@dataclass
class NoiseImage:
    """Normalized noise map, same shape as the source image."""

    values: np.ndarray  # (H, W, 3) uint8
    mode: NormMode


def threshold_binary(low: LowBitImage) -> NoiseImage:
    """Map every nonzero low-bit value to 255, zero stays zero."""
    values = np.where(low.values != 0, np.uint8(255), np.uint8(0))
    return NoiseImage(values, NormMode.THRESHOLD)


def scale_minmax(low: LowBitImage) -> NoiseImage:
    """Min-max scale each channel to [0, 255], rounding half-up.

    Statistics are per channel. A flat channel (min == max) maps to all
    zeros rather than raising, so batch runs survive degenerate inputs.
    """
    wide = low.values.astype(np.int32)
    zmin = wide.min(axis=(0, 1))
    zmax = wide.max(axis=(0, 1))
    spread = zmax - zmin
    safe = np.where(spread == 0, 1, spread)
    scaled = (510 * (wide - zmin) + safe) // (2 * safe)
    values = np.where(spread == 0, 0, scaled).astype(np.uint8)
    return NoiseImage(values, NormMode.SCALE)


def normalize(low: LowBitImage, mode: NormMode) -> NoiseImage:
    mode = NormMode(mode)
    if mode is NormMode.THRESHOLD:
        return threshold_binary(low)
    return scale_minmax(low)


def noise_from_image(img, plane_count: int, mode: NormMode) -> NoiseImage:
    """Fused decompose -> low-bit compose -> normalize via the active kernel backend.

    Exactly equivalent to the explicit chain through :mod:`lota.bitplane`;
    the equivalence is covered by tests.
    """
    if not 1 <= plane_count <= 8:
        raise ValueError(f"plane_count must be in 1..8, got {plane_count}")
    mode = NormMode(mode)
    arr = ensure_rgb8(img)
    values = _kernels.lowbit_noise(arr, plane_count, mode is NormMode.THRESHOLD)
    return NoiseImage(values, mode)
