"""Grid partition of noise images and multi-directional gradient patch scoring.

A noise image is cut into a regular grid of non-overlapping square patches.
Each patch is scored with four zero-sum difference kernels (horizontal,
vertical, diagonal, anti-diagonal); the L1 mass of the four responses,
summed over channels, measures how busy the patch's noise is. Selection
keeps the patch with the maximal score by default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .noisegen import NoiseImage

# Difference kernels, applied by valid-region cross-correlation (no padding,
# so patch scores never leak across patch boundaries). All coefficients sum
# to zero: constant patches score exactly 0.
GRAD_X = np.array([[-1, 1]], dtype=np.int32)
GRAD_Y = np.array([[-1], [1]], dtype=np.int32)
GRAD_XY = np.array([[-1, 0], [0, 1]], dtype=np.int32)
GRAD_YX = np.array([[0, -1], [1, 0]], dtype=np.int32)
KERNELS = (GRAD_X, GRAD_Y, GRAD_XY, GRAD_YX)

STRATEGIES = ("max", "min", "random")


@dataclass
class ScoredPatch:
    """A grid cell of the partitioned noise image plus its gradient score."""

    row_index: int
    col_index: int
    origin_x: int
    origin_y: int
    size: int
    pixels: np.ndarray  # (size, size, 3)
    score: int | None = None


def _noise_values(noise) -> np.ndarray:
    return noise.values if isinstance(noise, NoiseImage) else np.asarray(noise)


def _grid_shape(values: np.ndarray, patch_size: int) -> tuple[int, int]:
    if patch_size < 2:
        raise ValueError(f"patch_size must be >= 2, got {patch_size}")
    h, w = values.shape[:2]
    if h < patch_size or w < patch_size:
        raise ValueError(f"patch_size {patch_size} exceeds image size {w}x{h}")
    return h // patch_size, w // patch_size


def partition(noise, patch_size: int) -> list[ScoredPatch]:
    """Cut the image into its grid of non-overlapping patches, row-major.

    Trailing pixels that do not fill a whole patch are dropped. Scores are
    left unset.
    """
    values = _noise_values(noise)
    rows, cols = _grid_shape(values, patch_size)
    patches = []
    for r in range(rows):
        for c in range(cols):
            y, x = r * patch_size, c * patch_size
            block = values[y : y + patch_size, x : x + patch_size]
            patches.append(ScoredPatch(r, c, x, y, patch_size, block))
    return patches


def gradient_score(patch) -> int:
    """Sum of absolute pixel differences along the four kernel directions.

    Accepts a ScoredPatch or a bare array; channels (if any) are summed.
    Evaluated in int64, so it is exact for any 8-bit input and homogeneous
    under integer scaling.
    """
    pixels = patch.pixels if isinstance(patch, ScoredPatch) else np.asarray(patch)
    a = pixels.astype(np.int64)
    gx = np.abs(a[:, 1:] - a[:, :-1]).sum()
    gy = np.abs(a[1:, :] - a[:-1, :]).sum()
    gxy = np.abs(a[1:, 1:] - a[:-1, :-1]).sum()
    gyx = np.abs(a[1:, :-1] - a[:-1, 1:]).sum()
    return int(gx + gy + gxy + gyx)


def score_all(patches: list[ScoredPatch]) -> list[ScoredPatch]:
    """Fill in the score of every patch, in place."""
    for patch in patches:
        patch.score = gradient_score(patch)
    return patches


def score_patches(noise, patch_size: int) -> np.ndarray:
    """Score the whole patch grid in one pass via the active kernel backend.

    Returns an int64 (rows, cols) array; entry (r, c) equals
    ``gradient_score`` of the corresponding patch.
    """
    values = _noise_values(noise)
    _grid_shape(values, patch_size)
    if values.dtype != np.uint8 or values.ndim != 3 or values.shape[2] != 3:
        raise ValueError("score_patches expects an (H, W, 3) uint8 noise image")
    return _kernels.score_grid(np.ascontiguousarray(values), patch_size)


def _require_scored(patches: list[ScoredPatch]) -> None:
    if not patches:
        raise ValueError("empty patch list")
    if any(p.score is None for p in patches):
        raise ValueError("patch scores not computed")


def select_max(patches: list[ScoredPatch]) -> ScoredPatch:
    """Patch with the highest score; ties go to the smallest (row, col)."""
    _require_scored(patches)
    return min(patches, key=lambda p: (-p.score, p.row_index, p.col_index))


def select_min(patches: list[ScoredPatch]) -> ScoredPatch:
    """Patch with the lowest score; same tie-break as :func:`select_max`."""
    _require_scored(patches)
    return min(patches, key=lambda p: (p.score, p.row_index, p.col_index))


def select_strategy(
    patches: list[ScoredPatch],
    strategy: str,
    *,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
) -> ScoredPatch:
    """Select by strategy: ``max``, ``min``, or seeded uniform ``random``."""
    if strategy == "max":
        return select_max(patches)
    if strategy == "min":
        return select_min(patches)
    if strategy == "random":
        _require_scored(patches)
        if rng is None:
            rng = np.random.default_rng(0 if seed is None else seed)
        return patches[int(rng.integers(len(patches)))]
    raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")
