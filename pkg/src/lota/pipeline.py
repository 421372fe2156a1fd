"""End-to-end patch extraction plus the degradation operators.

Stage order is fixed: low-bit noise generation runs on the raw image, the
noise image is then resized to the working resolution, partitioned, scored,
and one patch is selected. Degradations (Gaussian blur, JPEG re-encoding)
are applied to the raw image before extraction when testing robustness.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field, replace

import cv2
import numpy as np
from PIL import Image
from scipy import ndimage

from .bitplane import ensure_rgb8
from .noisegen import NormMode, noise_from_image
from .patchsel import STRATEGIES, ScoredPatch, score_patches

RESIZE_FILTERS = {
    "nearest": cv2.INTER_NEAREST,
    "bilinear": cv2.INTER_LINEAR,
}


class DecodeError(Exception):
    """An input file could not be decoded into an RGB image."""


class DegradationError(Exception):
    """A degradation operator failed (codec error)."""


@dataclass(frozen=True)
class PipelineConfig:
    """Extraction settings; the defaults reproduce the reference setup.

    ``working_size`` is the (width, height) the noise image is resized to
    before patch selection. ``patch_output_size`` is the resolution a
    selected patch is upsampled to for the convolutional classifier path.
    """

    plane_count: int = 3
    norm: NormMode = NormMode.THRESHOLD
    working_size: tuple[int, int] = (256, 256)
    patch_size: int = 32
    strategy: str = "max"
    patch_output_size: tuple[int, int] = (256, 256)
    noise_filter: str = "nearest"
    raw_filter: str = "bilinear"
    seed: int = 0

    def validate(self) -> None:
        if not 1 <= self.plane_count <= 8:
            raise ValueError(f"plane_count must be in 1..8, got {self.plane_count}")
        NormMode(self.norm)
        if self.patch_size < 2:
            raise ValueError(f"patch_size must be >= 2, got {self.patch_size}")
        w, h = self.working_size
        if w < self.patch_size or h < self.patch_size:
            raise ValueError(
                f"working_size {self.working_size} smaller than patch_size {self.patch_size}"
            )
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        for name in (self.noise_filter, self.raw_filter):
            if name not in RESIZE_FILTERS:
                raise ValueError(f"unknown resize filter {name!r}")
        ow, oh = self.patch_output_size
        if ow < 1 or oh < 1:
            raise ValueError(f"bad patch_output_size {self.patch_output_size}")

    def to_dict(self) -> dict:
        data = asdict(self)
        data["norm"] = NormMode(self.norm).value
        data["working_size"] = list(self.working_size)
        data["patch_output_size"] = list(self.patch_output_size)
        return data

    def config_hash(self) -> str:
        """Deterministic 12-hex-digit identifier of this configuration."""
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:12]


def config_with(cfg: PipelineConfig, **changes) -> PipelineConfig:
    return replace(cfg, **changes)


@dataclass
class StageTimings:
    """Per-stage wall times in microseconds. ``extract_us`` spans noise
    generation through selection (the error-extraction cost); ``total_us``
    additionally covers decode and any driver overhead."""

    decode_us: int = 0
    noise_us: int = 0
    resize_us: int = 0
    score_us: int = 0
    extract_us: int = 0
    total_us: int = 0


@dataclass
class ExtractionRecord:
    """Manifest entry for one processed image."""

    source: str
    label: str | None
    generator: str | None
    config_hash: str
    row_index: int | None = None
    col_index: int | None = None
    score: int | None = None
    timings: StageTimings = field(default_factory=StageTimings)
    patch_path: str | None = None
    error: str | None = None


def load_image(path) -> np.ndarray:
    """Decode a PNG/JPEG file into an (H, W, 3) uint8 RGB array.

    Grayscale inputs are replicated to three channels, RGBA drops alpha.
    Raises DecodeError on anything unreadable.
    """
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
    except Exception as exc:
        raise DecodeError(f"{path}: {exc}") from exc
    return np.ascontiguousarray(arr)


def save_png(img: np.ndarray, path) -> None:
    Image.fromarray(ensure_rgb8(img), "RGB").save(path, format="PNG")


def resize_image(img: np.ndarray, size: tuple[int, int], filter_name: str) -> np.ndarray:
    """Resize to (width, height) with the named filter; identity when sizes match."""
    h, w = img.shape[:2]
    if (w, h) == tuple(size):
        return img
    return cv2.resize(img, tuple(size), interpolation=RESIZE_FILTERS[filter_name])


def _now_us() -> int:
    return time.perf_counter_ns() // 1_000


def extract(
    img,
    cfg: PipelineConfig,
    *,
    rng: np.random.Generator | None = None,
) -> tuple[ScoredPatch, ExtractionRecord]:
    """Run noise generation, resize, scoring and selection on one image.

    The returned record carries stage timings and the selection metadata;
    decode_us/total_us are left for the batch driver to fill in. ``rng``
    feeds the ``random`` selection strategy (defaults to a generator seeded
    with ``cfg.seed``).
    """
    cfg.validate()
    arr = ensure_rgb8(img)

    t0 = _now_us()
    noise = noise_from_image(arr, cfg.plane_count, cfg.norm)
    t1 = _now_us()
    resized = resize_image(noise.values, cfg.working_size, cfg.noise_filter)
    t2 = _now_us()

    grid = score_patches(resized, cfg.patch_size)
    rows, cols = grid.shape
    if cfg.strategy == "max":
        flat = int(np.argmax(grid))
    elif cfg.strategy == "min":
        flat = int(np.argmin(grid))
    else:
        if rng is None:
            rng = np.random.default_rng(cfg.seed)
        flat = int(rng.integers(rows * cols))
    r, c = divmod(flat, cols)
    p = cfg.patch_size
    patch = ScoredPatch(
        row_index=r,
        col_index=c,
        origin_x=c * p,
        origin_y=r * p,
        size=p,
        pixels=resized[r * p : (r + 1) * p, c * p : (c + 1) * p].copy(),
        score=int(grid[r, c]),
    )
    t3 = _now_us()

    record = ExtractionRecord(
        source="",
        label=None,
        generator=None,
        config_hash=cfg.config_hash(),
        row_index=r,
        col_index=c,
        score=patch.score,
        timings=StageTimings(
            noise_us=t1 - t0,
            resize_us=t2 - t1,
            score_us=t3 - t2,
            extract_us=t3 - t0,
            total_us=t3 - t0,
        ),
    )
    return patch, record


def prepare_nbc_patch(patch: ScoredPatch, cfg: PipelineConfig) -> np.ndarray:
    """Upsample a selected patch to the classifier input resolution.

    Nearest-neighbor by default so a thresholded patch keeps its {0, 255}
    value set; interpolating filters would invent intermediate grays.
    """
    return resize_image(
        np.ascontiguousarray(patch.pixels), cfg.patch_output_size, cfg.noise_filter
    )


def degrade_gaussian(img, sigma: float) -> np.ndarray:
    """Channel-wise Gaussian blur; kernel radius ceil(3*sigma), reflected edges.

    sigma = 0 is a bit-exact identity.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    arr = ensure_rgb8(img)
    if sigma == 0:
        return arr.copy()
    radius = math.ceil(3 * sigma)
    out = np.empty_like(arr)
    for c in range(3):
        blurred = ndimage.gaussian_filter(
            arr[:, :, c].astype(np.float64), sigma=sigma, mode="reflect", radius=radius
        )
        out[:, :, c] = np.clip(np.floor(blurred + 0.5), 0, 255).astype(np.uint8)
    return out


def degrade_jpeg(img, quality: int) -> np.ndarray:
    """Round-trip through a baseline JPEG codec at the given quality (1..100)."""
    if not 1 <= int(quality) <= 100:
        raise ValueError(f"quality must be in 1..100, got {quality}")
    arr = ensure_rgb8(img)
    try:
        buf = io.BytesIO()
        Image.fromarray(arr, "RGB").save(buf, format="JPEG", quality=int(quality), subsampling=0)
        buf.seek(0)
        with Image.open(buf) as im:
            out = np.asarray(im.convert("RGB"), dtype=np.uint8)
    except Exception as exc:
        raise DegradationError(f"jpeg round-trip failed: {exc}") from exc
    return np.ascontiguousarray(out)
