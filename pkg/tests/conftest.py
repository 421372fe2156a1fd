"""Shared fixtures: deterministic RNG, natural photos, tiny dataset trees."""

from __future__ import annotations

import numpy as np
import pytest
from PIL import Image


def random_rgb(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    return rng.integers(0, 256, (height, width, 3), dtype=np.uint8)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def natural_images() -> list[np.ndarray]:
    """A few bundled photographs (RGB uint8) for realistic-content tests."""
    import skimage.data as data

    images = []
    for name in ("astronaut", "coffee", "chelsea", "rocket", "immunohistochemistry"):
        img = getattr(data, name)()
        images.append(np.ascontiguousarray(img[:, :, :3]))
    return images


@pytest.fixture
def genimage_tree(tmp_path):
    """Factory writing a GenImage-style tree; returns (root, written paths)."""

    def build(n_per_class: int = 2, subset: str = "gen1", size: tuple[int, int] = (96, 128),
              seed: int = 11, jpeg_nature: bool = True):
        rng = np.random.default_rng(seed)
        root = tmp_path / "dataset"
        written = []
        for kind in ("ai", "nature"):
            folder = root / subset / "train" / kind
            folder.mkdir(parents=True, exist_ok=True)
            for i in range(n_per_class):
                arr = random_rgb(rng, *size)
                if kind == "nature" and jpeg_nature:
                    path = folder / f"img{i}.jpg"
                    Image.fromarray(arr, "RGB").save(path, format="JPEG", quality=95)
                else:
                    path = folder / f"img{i}.png"
                    Image.fromarray(arr, "RGB").save(path, format="PNG")
                written.append(path)
        return root, written

    return build
