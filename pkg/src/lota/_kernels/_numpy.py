"""Vectorized numpy implementations of the hot kernels.

Used when the compiled extension is unavailable or explicitly disabled.
Both functions must stay exactly equivalent to their Cython counterparts;
the equivalence is asserted in tests/test_backends.py.
"""

from __future__ import annotations

import numpy as np


def lowbit_noise(img: np.ndarray, plane_count: int, threshold: bool) -> np.ndarray:
    """Keep the lowest ``plane_count`` bits of every pixel and normalize.

    threshold=True maps every nonzero low-bit value to 255; otherwise each
    channel is min-max scaled to [0, 255] with half-up rounding (a flat
    channel comes out all zero).
    """
    low = img & np.uint8((1 << plane_count) - 1)
    if threshold:
        return np.where(low != 0, np.uint8(255), np.uint8(0))
    # per-channel lookup tables: low values are small, the map is tiny;
    # contiguous channel copies keep the reductions and indexing fast
    out = np.empty_like(low)
    values = np.arange(256, dtype=np.int64)
    for c in range(3):
        channel = np.ascontiguousarray(low[:, :, c])
        zmin, zmax = int(channel.min()), int(channel.max())
        spread = zmax - zmin
        if spread == 0:
            out[:, :, c] = 0
            continue
        # floor((510*d + spread) / (2*spread)) == round-half-up(255*d / spread)
        d = np.clip(values - zmin, 0, None)
        lut = ((510 * d + spread) // (2 * spread)).astype(np.uint8)
        out[:, :, c] = lut[channel]
    return out


def score_grid(noise: np.ndarray, patch_size: int) -> np.ndarray:
    """Gradient score of every patch in the regular non-overlapping grid.

    The score of a patch is the sum over channels of the absolute
    horizontal, vertical, diagonal, and anti-diagonal pixel differences,
    each taken over the patch's interior (no padding, so patches never see
    their neighbours). Returns an int64 (rows, cols) array.
    """
    h, w = noise.shape[:2]
    rows, cols = h // patch_size, w // patch_size
    a = noise[: rows * patch_size, : cols * patch_size].astype(np.int32)
    b = a.reshape(rows, patch_size, cols, patch_size, 3)
    gx = np.abs(b[:, :, :, 1:] - b[:, :, :, :-1]).sum(axis=(1, 3, 4), dtype=np.int64)
    gy = np.abs(b[:, 1:] - b[:, :-1]).sum(axis=(1, 3, 4), dtype=np.int64)
    gxy = np.abs(b[:, 1:, :, 1:] - b[:, :-1, :, :-1]).sum(axis=(1, 3, 4), dtype=np.int64)
    gyx = np.abs(b[:, 1:, :, :-1] - b[:, :-1, :, 1:]).sum(axis=(1, 3, 4), dtype=np.int64)
    return gx + gy + gxy + gyx
