"""Datasets over extraction manifests.

The trainer consumes only the file interfaces of the extraction CLI: the
``manifest.json`` document, the patch PNGs next to it, and (for the
noise-guided head) the raw source images the manifest points at.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torch.utils.data import Dataset

MANIFEST_SCHEMA = 1
LABEL_TO_TARGET = {"real": 0.0, "fake": 1.0}


def load_manifest(path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema") != MANIFEST_SCHEMA:
        raise ValueError(f"unsupported manifest schema {doc.get('schema')!r}")
    return doc


def usable_records(doc: dict) -> list[dict]:
    """Records that decoded cleanly and carry a known label."""
    return [
        rec
        for rec in doc["records"]
        if rec.get("error") is None and rec.get("label") in LABEL_TO_TARGET
    ]


def split_indices(
    labels: list[str], val_fraction: float, seed: int
) -> tuple[list[int], list[int]]:
    """Deterministic stratified train/validation split."""
    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    val_idx: list[int] = []
    for label in sorted(set(labels)):
        members = [i for i, y in enumerate(labels) if y == label]
        rng.shuffle(members)
        n_val = int(round(len(members) * val_fraction))
        val_idx.extend(members[:n_val])
        train_idx.extend(members[n_val:])
    return sorted(train_idx), sorted(val_idx)


def _to_tensor(img: Image.Image) -> torch.Tensor:
    arr = np.asarray(img, dtype=np.float32) / 255.0
    return torch.from_numpy((arr - 0.5) / 0.5).permute(2, 0, 1).contiguous()


class NbcPatchDataset(Dataset):
    """Upsampled noise patches + binary targets for the noise-based head."""

    def __init__(self, manifest_path, records: list[dict], doc: dict):
        self.base = Path(manifest_path).parent
        self.records = records
        width, height = doc["config"]["patch_output_size"]
        self.output_size = (int(width), int(height))

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, index: int):
        rec = self.records[index]
        with Image.open(self.base / rec["patch_path"]) as im:
            # nearest-neighbor keeps the binary noise statistic intact
            patch = im.convert("RGB").resize(self.output_size, Image.NEAREST)
            tensor = _to_tensor(patch)
        return tensor, torch.tensor([LABEL_TO_TARGET[rec["label"]]])


class NgcPairDataset(Dataset):
    """(raw image, noise patch) pairs for the noise-guided head."""

    def __init__(
        self,
        manifest_path,
        records: list[dict],
        doc: dict,
        image_root=None,
        input_size: int = 256,
    ):
        self.base = Path(manifest_path).parent
        root = image_root if image_root is not None else doc.get("input_root")
        if root is None:
            raise ValueError("manifest has no input_root; pass image_root explicitly")
        self.image_root = Path(root)
        self.records = records
        self.input_size = input_size

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, index: int):
        rec = self.records[index]
        with Image.open(self.image_root / rec["source"]) as im:
            raw = im.convert("RGB").resize((self.input_size, self.input_size), Image.BILINEAR)
            raw_tensor = _to_tensor(raw)
        with Image.open(self.base / rec["patch_path"]) as im:
            patch_tensor = _to_tensor(im.convert("RGB"))
        return raw_tensor, patch_tensor, torch.tensor([LABEL_TO_TARGET[rec["label"]]])
