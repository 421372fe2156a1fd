"""Checkpoint evaluation: emit a score CSV consumable by the extraction CLI."""

from __future__ import annotations

import csv
from pathlib import Path

import torch
from torch.utils.data import DataLoader

from .data import NbcPatchDataset, NgcPairDataset, load_manifest, usable_records
from .train import TrainConfig, build_model, _forward


def load_checkpoint(path) -> dict:
    return torch.load(path, map_location="cpu", weights_only=False)


@torch.no_grad()
def evaluate(checkpoint_path, manifest_path, out_csv, *, image_root=None, batch_size: int = 64) -> Path:
    """Score every usable record; writes ``id,score,label`` rows and returns the path.

    Refuses to run when the checkpoint was trained against a different
    extraction configuration (config hash mismatch).
    """
    ckpt = load_checkpoint(checkpoint_path)
    doc = load_manifest(manifest_path)
    if ckpt["config_hash"] != doc["config_hash"]:
        raise RuntimeError(
            f"checkpoint extraction config {ckpt['config_hash']} does not match "
            f"manifest config {doc['config_hash']}; re-extract or retrain"
        )
    records = usable_records(doc)
    if not records:
        raise ValueError("manifest has no usable records to score")

    cfg = TrainConfig(**ckpt["train_config"])
    cfg.pretrained = False  # weights come from the checkpoint
    model_kind = ckpt["model_kind"]
    model = build_model(model_kind, cfg, doc)
    model.load_state_dict(ckpt["state_dict"])
    model.eval()

    if model_kind == "nbc":
        dataset = NbcPatchDataset(manifest_path, records, doc)
    else:
        dataset = NgcPairDataset(manifest_path, records, doc, image_root=image_root)
    loader = DataLoader(dataset, batch_size=batch_size)

    probs: list[float] = []
    for batch in loader:
        logits, _ = _forward(model, batch, model_kind)
        probs.extend(torch.sigmoid(logits).flatten().tolist())

    out_csv = Path(out_csv)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    with open(out_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "score", "label"])
        for rec, prob in zip(records, probs):
            writer.writerow([rec["source"], f"{prob:.10g}", rec["label"]])
    return out_csv
