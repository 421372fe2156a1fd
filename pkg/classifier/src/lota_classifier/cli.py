"""Command-line front end for training and evaluating the classifier heads."""

from __future__ import annotations

from pathlib import Path

import click

from .evaluate import evaluate
from .models import BACKBONES
from .train import MODEL_KINDS, TrainConfig, train


@click.group()
def cli():
    """Classification heads over extracted noise-patch manifests."""


@cli.command("train")
@click.option("--manifest", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="manifest.json from an extraction run.")
@click.option("--model", "model_kind", type=click.Choice(MODEL_KINDS), default="nbc",
              show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False, path_type=Path),
              help="Directory for the checkpoint and training log.")
@click.option("--lr", "learning_rate", type=float, default=1e-4, show_default=True)
@click.option("--batch-size", type=int, default=64, show_default=True)
@click.option("--epochs", "max_epochs", type=int, default=30, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--val-fraction", type=float, default=0.2, show_default=True)
@click.option("--backbone", type=click.Choice(BACKBONES), default="resnet50", show_default=True)
@click.option("--pretrained/--no-pretrained", default=True, show_default=True,
              help="Start from ImageNet weights when available.")
@click.option("--image-root", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=None, help="Root for raw images (ngc); defaults to the manifest's input_root.")
def train_command(manifest, model_kind, out, image_root, **cfg_flags):
    """Train a head on an extraction manifest."""
    cfg = TrainConfig(**cfg_flags)
    try:
        checkpoint, log = train(model_kind, manifest, cfg, out, image_root=image_root)
    except (ValueError, FileNotFoundError) as exc:
        raise click.ClickException(str(exc))
    final = log[-1]
    val = f" val_acc {final['val_acc']:.3f}" if "val_acc" in final else ""
    click.echo(
        f"trained {model_kind} for {len(log)} epoch(s): "
        f"loss {final['train_loss']:.4f} acc {final['train_acc']:.3f}{val} -> {checkpoint}"
    )


@cli.command("evaluate")
@click.option("--checkpoint", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--manifest", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path),
              help="Score CSV to write (id,score,label).")
@click.option("--image-root", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=None)
@click.option("--batch-size", type=int, default=64, show_default=True)
def evaluate_command(checkpoint, manifest, out, image_root, batch_size):
    """Score a manifest with a trained checkpoint."""
    try:
        path = evaluate(checkpoint, manifest, out, image_root=image_root, batch_size=batch_size)
    except (ValueError, RuntimeError, FileNotFoundError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"scores -> {path}")


def main():
    cli(prog_name="lota-classifier")


if __name__ == "__main__":
    main()
