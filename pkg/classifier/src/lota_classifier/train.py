"""Training loop for the two classification heads.

Binary cross-entropy on a single logit, Adam optimizer, deterministic for
a fixed seed. Checkpoints carry the extraction config hash so a model is
never evaluated against patches produced with different settings.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from torch import nn
from torch.utils.data import DataLoader, Subset

from .data import NbcPatchDataset, NgcPairDataset, load_manifest, split_indices, usable_records
from .models import BACKBONES, NbcModel, NgcModel

MODEL_KINDS = ("nbc", "ngc")


@dataclass
class TrainConfig:
    learning_rate: float = 1e-4
    batch_size: int = 64
    max_epochs: int = 30
    optimizer: str = "adam"
    seed: int = 0
    val_fraction: float = 0.2
    backbone: str = "resnet50"
    pretrained: bool = True
    embed_dim: int = 256
    num_heads: int = 8

    def validate(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.batch_size < 1 or self.max_epochs < 1:
            raise ValueError("batch_size and max_epochs must be >= 1")
        if self.optimizer != "adam":
            raise ValueError(f"unsupported optimizer {self.optimizer!r}")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ValueError("val_fraction must be in [0, 1)")
        if self.backbone not in BACKBONES:
            raise ValueError(f"unknown backbone {self.backbone!r}")


def build_model(model_kind: str, cfg: TrainConfig, doc: dict) -> nn.Module:
    if model_kind == "nbc":
        return NbcModel(backbone=cfg.backbone, pretrained=cfg.pretrained)
    if model_kind == "ngc":
        return NgcModel(
            backbone=cfg.backbone,
            pretrained=cfg.pretrained,
            patch_size=int(doc["config"]["patch_size"]),
            embed_dim=cfg.embed_dim,
            num_heads=cfg.num_heads,
        )
    raise ValueError(f"unknown model kind {model_kind!r}, expected one of {MODEL_KINDS}")


def _forward(model: nn.Module, batch, model_kind: str):
    if model_kind == "nbc":
        patches, targets = batch
        return model(patches), targets
    raws, patches, targets = batch
    return model(raws, patches), targets


def _accuracy(logits: torch.Tensor, targets: torch.Tensor) -> float:
    predictions = (torch.sigmoid(logits) >= 0.5).float()
    return float((predictions == targets).float().mean())


def train(
    model_kind: str,
    manifest_path,
    cfg: TrainConfig,
    out_dir,
    *,
    image_root=None,
) -> tuple[Path, list[dict]]:
    """Train a head on one manifest; returns (checkpoint path, per-epoch log)."""
    cfg.validate()
    if model_kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {model_kind!r}, expected one of {MODEL_KINDS}")
    doc = load_manifest(manifest_path)
    records = usable_records(doc)
    labels = [rec["label"] for rec in records]
    if len(set(labels)) < 2:
        raise ValueError("training requires both classes in the manifest")

    torch.manual_seed(cfg.seed)
    if model_kind == "nbc":
        dataset = NbcPatchDataset(manifest_path, records, doc)
    else:
        dataset = NgcPairDataset(manifest_path, records, doc, image_root=image_root)
    train_idx, val_idx = split_indices(labels, cfg.val_fraction, cfg.seed)
    loader = DataLoader(
        Subset(dataset, train_idx),
        batch_size=cfg.batch_size,
        shuffle=True,
        generator=torch.Generator().manual_seed(cfg.seed),
    )
    val_loader = (
        DataLoader(Subset(dataset, val_idx), batch_size=cfg.batch_size) if val_idx else None
    )

    model = build_model(model_kind, cfg, doc)
    optimizer = torch.optim.Adam(model.parameters(), lr=cfg.learning_rate)
    loss_fn = nn.BCEWithLogitsLoss()

    log: list[dict] = []
    for epoch in range(cfg.max_epochs):
        model.train()
        total_loss, total_acc, batches = 0.0, 0.0, 0
        for batch in loader:
            optimizer.zero_grad()
            logits, targets = _forward(model, batch, model_kind)
            loss = loss_fn(logits, targets)
            loss.backward()
            optimizer.step()
            total_loss += float(loss.detach())
            total_acc += _accuracy(logits.detach(), targets)
            batches += 1
        entry = {
            "epoch": epoch,
            "train_loss": total_loss / batches,
            "train_acc": total_acc / batches,
        }
        if val_loader is not None:
            entry["val_acc"] = evaluate_accuracy(model, val_loader, model_kind)
        log.append(entry)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint_path = out_dir / f"{model_kind}.pt"
    torch.save(
        {
            "model_kind": model_kind,
            "state_dict": model.state_dict(),
            "train_config": asdict(cfg),
            "config_hash": doc["config_hash"],
            "patch_size": int(doc["config"]["patch_size"]),
            "log": log,
        },
        checkpoint_path,
    )
    (out_dir / f"{model_kind}_log.json").write_text(json.dumps(log, indent=2) + "\n")
    return checkpoint_path, log


@torch.no_grad()
def evaluate_accuracy(model: nn.Module, loader: DataLoader, model_kind: str) -> float:
    model.eval()
    correct, count = 0.0, 0
    for batch in loader:
        logits, targets = _forward(model, batch, model_kind)
        correct += _accuracy(logits, targets) * targets.shape[0]
        count += targets.shape[0]
    return correct / count if count else float("nan")
