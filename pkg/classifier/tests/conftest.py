"""Fixtures: synthetic extraction manifests written via the file schema."""

from __future__ import annotations

import hashlib
import json

import numpy as np
import pytest
from PIL import Image


def write_manifest_tree(
    root,
    n_per_class: int = 16,
    patch_size: int = 32,
    patch_output: int = 64,
    seed: int = 0,
    config_hash: str | None = None,
    with_sources: bool = False,
):
    """Create an extraction-run directory: manifest.json + patches/ (+ sources).

    Fake patches are sparse near-black noise, real patches dense binary
    noise, so any head can separate them quickly at desk scale.
    """
    rng = np.random.default_rng(seed)
    out = root / "run"
    (out / "patches").mkdir(parents=True, exist_ok=True)
    sources = root / "sources"
    if with_sources:
        sources.mkdir(exist_ok=True)

    config = {
        "plane_count": 3,
        "norm": "threshold",
        "working_size": [256, 256],
        "patch_size": patch_size,
        "strategy": "max",
        "patch_output_size": [patch_output, patch_output],
        "noise_filter": "nearest",
        "raw_filter": "bilinear",
        "seed": 0,
    }
    if config_hash is None:
        canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
        config_hash = hashlib.sha256(canon.encode()).hexdigest()[:12]

    records = []
    index = 0
    for label in ("fake", "real"):
        for _ in range(n_per_class):
            if label == "real":
                patch = (rng.random((patch_size, patch_size, 3)) < 0.85) * 255
            else:
                patch = (rng.random((patch_size, patch_size, 3)) < 0.03) * 255
            patch = patch.astype(np.uint8)
            name = f"{index:06d}.png"
            Image.fromarray(patch, "RGB").save(out / "patches" / name)
            source = f"{label}/{name}"
            if with_sources:
                (sources / label).mkdir(exist_ok=True)
                raw = rng.integers(0, 256, (64, 64, 3), dtype=np.uint8)
                Image.fromarray(raw, "RGB").save(sources / source)
            records.append(
                {
                    "source": source,
                    "label": label,
                    "generator": "synthetic",
                    "config_hash": config_hash,
                    "row_index": 0,
                    "col_index": 0,
                    "score": int(patch.astype(np.int64).sum()),
                    "timings": {
                        "decode_us": 0,
                        "noise_us": 0,
                        "resize_us": 0,
                        "score_us": 0,
                        "extract_us": 0,
                        "total_us": 0,
                    },
                    "patch_path": f"patches/{name}",
                    "error": None,
                }
            )
            index += 1

    doc = {
        "schema": 1,
        "config": config,
        "config_hash": config_hash,
        "degrade": None,
        "input_root": str(sources) if with_sources else None,
        "summary": {"images": len(records), "errors": 0},
        "records": records,
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return manifest_path


@pytest.fixture
def manifest_factory(tmp_path):
    def build(**kwargs):
        return write_manifest_tree(tmp_path, **kwargs)

    return build
