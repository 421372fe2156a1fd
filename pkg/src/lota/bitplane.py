"""Bit-plane decomposition of 8-bit RGB images and low-bit recomposition.

An 8-bit channel value is the weighted sum of its 8 bits; slicing an image
into per-bit binary planes is therefore lossless. The lowest planes carry
sensor noise and fine detail rather than visual content, which is what the
rest of the pipeline feeds on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def ensure_rgb8(img) -> np.ndarray:
    """Validate an (H, W, 3) uint8 pixel grid and return it C-contiguous."""
    arr = np.asarray(img)
    if arr.dtype != np.uint8:
        raise ValueError(f"expected uint8 pixels, got {arr.dtype}")
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    return np.ascontiguousarray(arr)


@dataclass
class BitPlaneStack:
    """Eight binary planes per channel: ``planes[k]`` holds bit k of every pixel.

    ``planes`` has shape (8, H, W, 3) with values in {0, 1}; k=0 is the
    least significant bit.
    """

    planes: np.ndarray

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]


@dataclass
class LowBitImage:
    """Recombination of the ``plane_count`` lowest planes; values < 2**plane_count."""

    values: np.ndarray  # (H, W, 3) uint8
    plane_count: int


def decompose(img) -> BitPlaneStack:
    """Slice an RGB image into its 8 bit-planes per channel."""
    arr = ensure_rgb8(img)
    shifts = np.arange(8, dtype=np.uint8).reshape(8, 1, 1, 1)
    planes = (arr[np.newaxis, ...] >> shifts) & np.uint8(1)
    return BitPlaneStack(planes)


def compose_low_bits(stack: BitPlaneStack, plane_count: int) -> LowBitImage:
    """Weighted sum of the ``plane_count`` least significant planes."""
    if not 1 <= plane_count <= 8:
        raise ValueError(f"plane_count must be in 1..8, got {plane_count}")
    weights = (1 << np.arange(plane_count, dtype=np.uint16)).reshape(-1, 1, 1, 1)
    values = (stack.planes[:plane_count].astype(np.uint16) * weights).sum(axis=0)
    return LowBitImage(values.astype(np.uint8), plane_count)


def recompose_full(stack: BitPlaneStack) -> np.ndarray:
    """Rebuild the original image from all 8 planes, bit-exactly."""
    return compose_low_bits(stack, 8).values
