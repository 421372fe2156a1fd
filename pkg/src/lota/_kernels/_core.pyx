# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: fused low-bit noise generation and patch gradient scoring.

Semantically identical to lota._kernels._numpy; see that module for the
contract. Inputs must be C-contiguous uint8 (H, W, 3) arrays.
"""

import numpy as np


def lowbit_noise(const unsigned char[:, :, ::1] img, int plane_count, bint threshold):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t i, j
    cdef int c, v, d, spread
    cdef int mask = (1 << plane_count) - 1
    cdef int zmin[3]
    cdef int zmax[3]
    cdef unsigned char lut[3][256]

    out_arr = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_arr

    if threshold:
        with nogil:
            for i in range(h):
                for j in range(w):
                    for c in range(3):
                        out[i, j, c] = 255 if (img[i, j, c] & mask) != 0 else 0
        return out_arr

    with nogil:
        for c in range(3):
            zmin[c] = 255
            zmax[c] = 0
        for i in range(h):
            for j in range(w):
                for c in range(3):
                    v = img[i, j, c] & mask
                    if v < zmin[c]:
                        zmin[c] = v
                    if v > zmax[c]:
                        zmax[c] = v
        # 256-entry map per channel: raw byte -> scaled low bits
        for c in range(3):
            spread = zmax[c] - zmin[c]
            for v in range(256):
                d = (v & mask) - zmin[c]
                if spread == 0 or d <= 0:
                    lut[c][v] = 0
                else:
                    # floor((510*d + spread) / (2*spread)) == half-up(255*d/spread)
                    lut[c][v] = <unsigned char>((510 * d + spread) // (2 * spread))
        for i in range(h):
            for j in range(w):
                for c in range(3):
                    out[i, j, c] = lut[c][img[i, j, c]]
    return out_arr


def score_grid(const unsigned char[:, :, ::1] noise, int patch_size):
    cdef Py_ssize_t h = noise.shape[0], w = noise.shape[1]
    cdef Py_ssize_t rows = h // patch_size, cols = w // patch_size
    cdef Py_ssize_t r, s, y0, x0, y, x
    cdef int i, j, c, a, right, down, diag, anti
    cdef long long acc

    out_arr = np.zeros((rows, cols), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr

    with nogil:
        for r in range(rows):
            y0 = r * patch_size
            for s in range(cols):
                x0 = s * patch_size
                acc = 0
                for i in range(patch_size):
                    y = y0 + i
                    for j in range(patch_size):
                        x = x0 + j
                        for c in range(3):
                            a = noise[y, x, c]
                            if j + 1 < patch_size:
                                right = noise[y, x + 1, c]
                                acc += right - a if right >= a else a - right
                            if i + 1 < patch_size:
                                down = noise[y + 1, x, c]
                                acc += down - a if down >= a else a - down
                                if j + 1 < patch_size:
                                    diag = noise[y + 1, x + 1, c]
                                    acc += diag - a if diag >= a else a - diag
                                    # anti-diagonal pairs z(i+1,j) with z(i,j+1)
                                    anti = down - right
                                    acc += anti if anti >= 0 else -anti
                out[r, s] = acc
    return out_arr
