"""Batch drivers: dataset extraction runs and ablation sweeps.

A run walks a dataset tree, extracts one patch per image with a bounded
worker pool, writes the patches as PNGs, and emits a manifest. Failed
decodes become error records; the run continues.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .dataset import ImageEntry, discover_images
from .manifest import DatasetManifest, build_summary, save_manifest
from .noisegen import noise_from_image
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
    resize_image,
    save_png,
    _now_us,
)

ABLATION_AXES = {
    "patch_size": (16, 32, 48, 64),
    "strategy": ("max", "min", "random"),
    "plane_count": (1, 2, 3, 4, 5, 6),
}


def resolve_jobs(requested: int | None) -> int:
    """Worker count: the --jobs flag capped by the LOTA_THREADS env var."""
    jobs = requested if requested and requested > 0 else 1
    cap = os.environ.get("LOTA_THREADS")
    if cap:
        jobs = max(1, min(jobs, int(cap)))
    return jobs


def _process_one(
    index: int,
    entry: ImageEntry,
    root: Path,
    cfg: PipelineConfig,
    patches_dir: Path,
    degrade: dict | None,
    noise_dir: Path | None,
) -> ExtractionRecord:
    source = entry.path.relative_to(root).as_posix()
    started = _now_us()
    try:
        img = load_image(entry.path)
    except DecodeError as exc:
        return ExtractionRecord(
            source=source,
            label=entry.label,
            generator=entry.generator,
            config_hash=cfg.config_hash(),
            timings=StageTimings(total_us=_now_us() - started),
            error=str(exc),
        )
    decoded = _now_us()

    if degrade:
        sigma = degrade.get("blur_sigma")
        quality = degrade.get("jpeg_quality")
        try:
            if sigma:
                img = degrade_gaussian(img, sigma)
            if quality:
                img = degrade_jpeg(img, quality)
        except DegradationError as exc:
            return ExtractionRecord(
                source=source,
                label=entry.label,
                generator=entry.generator,
                config_hash=cfg.config_hash(),
                timings=StageTimings(decode_us=decoded - started, total_us=_now_us() - started),
                error=str(exc),
            )

    rng = np.random.default_rng([cfg.seed, index])
    patch, record = extract(img, cfg, rng=rng)
    record.source = source
    record.label = entry.label
    record.generator = entry.generator
    record.timings.decode_us = decoded - started

    patch_name = f"{index:06d}.png"
    save_png(patch.pixels, patches_dir / patch_name)
    record.patch_path = f"patches/{patch_name}"

    if noise_dir is not None:
        noise = noise_from_image(img, cfg.plane_count, cfg.norm)
        save_png(
            resize_image(noise.values, cfg.working_size, cfg.noise_filter),
            noise_dir / patch_name,
        )

    record.timings.total_us = _now_us() - started
    return record


def run_extract(
    input_dir,
    output_dir,
    cfg: PipelineConfig,
    *,
    labels_csv=None,
    jobs: int = 1,
    degrade: dict | None = None,
    dump_noise: bool = False,
) -> DatasetManifest:
    """Extract a patch from every image under ``input_dir`` into ``output_dir``.

    Writes ``patches/NNNNNN.png`` plus ``manifest.json``. Record order
    follows the sorted relative paths, so two runs with the same seed are
    identical apart from timing fields.
    """
    cfg.validate()
    entries = discover_images(input_dir, labels_csv)
    root = Path(input_dir)
    out = Path(output_dir)
    patches_dir = out / "patches"
    patches_dir.mkdir(parents=True, exist_ok=True)
    noise_dir = None
    if dump_noise:
        noise_dir = out / "noise"
        noise_dir.mkdir(parents=True, exist_ok=True)

    jobs = resolve_jobs(jobs)
    if jobs > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(
                pool.map(
                    lambda pair: _process_one(
                        pair[0], pair[1], root, cfg, patches_dir, degrade, noise_dir
                    ),
                    enumerate(entries),
                )
            )
    else:
        records = [
            _process_one(i, e, root, cfg, patches_dir, degrade, noise_dir)
            for i, e in enumerate(entries)
        ]

    manifest = DatasetManifest(
        config=cfg.to_dict(),
        config_hash=cfg.config_hash(),
        records=records,
        summary=build_summary(records),
        degrade=degrade or None,
        input_root=str(root.resolve()),
    )
    save_manifest(manifest, out / "manifest.json")
    return manifest


def ablation_config(cfg: PipelineConfig, axis: str, value) -> PipelineConfig:
    """Derive the config for one ablation value, validating the axis range."""
    legal = ABLATION_AXES.get(axis)
    if legal is None:
        raise ValueError(f"unknown ablation axis {axis!r}, expected one of {tuple(ABLATION_AXES)}")
    if value not in legal:
        raise ValueError(f"illegal {axis} value {value!r}, expected one of {legal}")
    return replace(cfg, **{axis: value})


def run_ablation(
    input_dir,
    output_dir,
    axis: str,
    values,
    cfg: PipelineConfig,
    *,
    labels_csv=None,
    jobs: int = 1,
) -> list[tuple[object, DatasetManifest]]:
    """One extraction pass per axis value, outputs namespaced per value.

    All values are validated before any work starts.
    """
    configs = [(v, ablation_config(cfg, axis, v)) for v in values]
    results = []
    for value, sub_cfg in configs:
        sub_out = Path(output_dir) / f"{axis}={value}"
        manifest = run_extract(input_dir, sub_out, sub_cfg, labels_csv=labels_csv, jobs=jobs)
        results.append((value, manifest))
    return results
