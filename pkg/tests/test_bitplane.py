"""Bit-plane decomposition and recomposition contracts."""

import numpy as np
import pytest

from lota.bitplane import compose_low_bits, decompose, ensure_rgb8, recompose_full

from conftest import random_rgb


def single_pixel(r, g, b):
    return np.array([[[r, g, b]]], dtype=np.uint8)


class TestDecompose:
    def test_all_bits_set(self):
        stack = decompose(single_pixel(255, 255, 255))
        assert stack.planes.shape == (8, 1, 1, 3)
        assert (stack.planes == 1).all()

    def test_zero_pixel(self):
        stack = decompose(single_pixel(0, 0, 0))
        assert (stack.planes == 0).all()

    def test_binary_expansion_of_five(self):
        # 5 = 0b00000101: bits 0 and 2 set
        stack = decompose(single_pixel(5, 0, 0))
        red = stack.planes[:, 0, 0, 0]
        assert list(red) == [1, 0, 1, 0, 0, 0, 0, 0]
        assert (stack.planes[:, 0, 0, 1:] == 0).all()

    def test_planes_are_binary(self, rng):
        stack = decompose(random_rgb(rng, 17, 23))
        assert set(np.unique(stack.planes)) <= {0, 1}

    def test_rejects_wrong_dtype(self):
        with pytest.raises(ValueError):
            decompose(np.zeros((4, 4, 3), dtype=np.float32))

    def test_rejects_wrong_channels(self):
        with pytest.raises(ValueError):
            decompose(np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(ValueError):
            decompose(np.zeros((4, 4, 4), dtype=np.uint8))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            ensure_rgb8(np.zeros((0, 4, 3), dtype=np.uint8))


class TestRoundTrip:
    def test_random_images_identity(self, rng):
        for _ in range(25):
            h, w = int(rng.integers(1, 65)), int(rng.integers(1, 65))
            img = random_rgb(rng, h, w)
            assert (recompose_full(decompose(img)) == img).all()

    def test_all_zero_stack_black(self):
        stack = decompose(np.zeros((3, 5, 3), dtype=np.uint8))
        out = recompose_full(stack)
        assert out.dtype == np.uint8
        assert (out == 0).all()


class TestComposeLowBits:
    def test_eq_all_ones_m3(self):
        # low three bits all set -> 4 + 2 + 1
        low = compose_low_bits(decompose(single_pixel(7, 7, 7)), 3)
        assert (low.values == 7).all()

    def test_bits_101_m3(self):
        low = compose_low_bits(decompose(single_pixel(5, 5, 5)), 3)
        assert (low.values == 5).all()

    def test_pixel_200_low_bits_zero(self):
        # 200 = 0b11001000: low three bits are 000
        low = compose_low_bits(decompose(single_pixel(200, 200, 200)), 3)
        assert (low.values == 0).all()

    @pytest.mark.parametrize("m", range(1, 9))
    def test_low_bit_law(self, m, rng):
        img = random_rgb(rng, 31, 19)
        low = compose_low_bits(decompose(img), m)
        assert low.plane_count == m
        assert (low.values == img.astype(np.int32) % (1 << m)).all()
        assert low.values.max() < (1 << m)

    def test_monotone_plane_semantics(self, rng):
        img = random_rgb(rng, 16, 16)
        stack = decompose(img)
        for m in range(1, 8):
            lower = compose_low_bits(stack, m).values.astype(np.int32)
            upper = compose_low_bits(stack, m + 1).values.astype(np.int32)
            assert (upper - lower == (1 << m) * stack.planes[m]).all()

    @pytest.mark.parametrize("m", [0, 9, -1])
    def test_m_out_of_range(self, m):
        stack = decompose(single_pixel(1, 2, 3))
        with pytest.raises(ValueError):
            compose_low_bits(stack, m)
