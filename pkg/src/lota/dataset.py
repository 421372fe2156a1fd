"""Dataset discovery for GenImage-style directory trees.

Expected layout is ``<subset>/<split>/{ai,nature}/image.{png,jpg}``; the
``ai``/``nature`` folder names carry the label and the subset folder names
the generator. A CSV file (columns ``path,label``, paths relative to the
root) can override or supply labels for other layouts.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}

LABEL_DIRS = {"ai": "fake", "nature": "real"}
LABEL_ALIASES = {
    "fake": "fake",
    "ai": "fake",
    "1": "fake",
    "real": "real",
    "nature": "real",
    "0": "real",
}


@dataclass
class ImageEntry:
    path: Path
    label: str | None  # "real" | "fake" | None
    generator: str | None


def normalize_label(raw: str) -> str:
    label = LABEL_ALIASES.get(raw.strip().lower())
    if label is None:
        raise ValueError(f"unrecognized label {raw!r} (expected real/fake/ai/nature/0/1)")
    return label


def read_labels_csv(path) -> dict[str, str]:
    """Relative posix path -> normalized label, from a two-column CSV."""
    overrides: dict[str, str] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"path", "label"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: labels CSV needs 'path' and 'label' columns")
        for row in reader:
            overrides[Path(row["path"]).as_posix()] = normalize_label(row["label"])
    return overrides


def discover_images(root, labels_csv=None) -> list[ImageEntry]:
    """All image files under ``root``, sorted by relative path, with labels."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"input directory not found: {root}")
    overrides = read_labels_csv(labels_csv) if labels_csv else {}

    files = sorted(
        (p for p in root.rglob("*") if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
        key=lambda p: p.relative_to(root).as_posix(),
    )
    entries = []
    for path in files:
        rel = path.relative_to(root)
        label = overrides.get(rel.as_posix())
        if label is None:
            for part in rel.parts[:-1]:
                if part.lower() in LABEL_DIRS:
                    label = LABEL_DIRS[part.lower()]
                    break
        generator = None
        if len(rel.parts) >= 3 and rel.parts[0].lower() not in LABEL_DIRS:
            generator = rel.parts[0]
        entries.append(ImageEntry(path, label, generator))
    return entries
