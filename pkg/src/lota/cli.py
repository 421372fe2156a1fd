"""Batch command-line front end.

Verbs: ``extract`` (dataset -> patches + manifest), ``bench`` (per-stage
latency), ``ablate`` (config sweeps), ``metrics`` (ACC/AP over a score
file), ``degrade`` (write blurred / JPEG-recompressed copies).

Exit codes: 0 success; 1 runtime failure; 2 usage error; 3 extraction
completed but at least one input failed to decode.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import _kernels
from .batch import ABLATION_AXES, resolve_jobs, run_ablation, run_extract
from .bench import run_bench
from .dataset import discover_images
from .metrics import compute_acc, compute_ap, read_scores
from .noisegen import NormMode
from .pipeline import (
    DecodeError,
    PipelineConfig,
    degrade_gaussian,
    degrade_jpeg,
    load_image,
    save_png,
)

DECODE_ERROR_EXIT = 3


def config_options(fn):
    opts = [
        click.option("--planes", "plane_count", type=click.IntRange(1, 8), default=3,
                     show_default=True, help="Number of least-significant bit-planes."),
        click.option("--norm", type=click.Choice(["threshold", "scale"]), default="threshold",
                     show_default=True, help="Noise normalization mode."),
        click.option("--patch-size", type=int, default=32, show_default=True,
                     help="Patch side length in pixels."),
        click.option("--strategy", type=click.Choice(["max", "min", "random"]), default="max",
                     show_default=True, help="Patch selection strategy."),
        click.option("--seed", type=int, default=0, show_default=True,
                     help="Seed for the random selection strategy."),
        click.option("--resize-filter", type=click.Choice(["nearest", "bilinear"]),
                     default="nearest", show_default=True,
                     help="Filter for resizing the noise image."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def build_config(plane_count, norm, patch_size, strategy, seed, resize_filter) -> PipelineConfig:
    cfg = PipelineConfig(
        plane_count=plane_count,
        norm=NormMode(norm),
        patch_size=patch_size,
        strategy=strategy,
        seed=seed,
        noise_filter=resize_filter,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise click.UsageError(str(exc))
    return cfg


@click.group()
@click.version_option(package_name="lota")
def cli():
    """Bit-plane noise patch extraction for AI-generated-image detection."""


@cli.command()
@click.argument("input_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(file_okay=False, path_type=Path),
              help="Output directory for patches/ and manifest.json.")
@config_options
@click.option("--labels", "labels_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="CSV (path,label) overriding folder-derived labels.")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Worker threads (capped by LOTA_THREADS).")
@click.option("--blur-sigma", type=float, default=None,
              help="Gaussian-blur the raw image before extraction.")
@click.option("--jpeg-quality", type=click.IntRange(1, 100), default=None,
              help="JPEG-recompress the raw image before extraction.")
@click.option("--dump-noise", is_flag=True, help="Also write the resized noise images (debug).")
@click.pass_context
def extract(ctx, input_dir, out, labels_csv, jobs, blur_sigma, jpeg_quality, dump_noise, **cfg_flags):
    """Extract one noise patch per image under INPUT_DIR."""
    cfg = build_config(**cfg_flags)
    degrade = {}
    if blur_sigma is not None:
        if blur_sigma < 0:
            raise click.UsageError("--blur-sigma must be >= 0")
        degrade["blur_sigma"] = blur_sigma
    if jpeg_quality is not None:
        degrade["jpeg_quality"] = jpeg_quality
    try:
        manifest = run_extract(
            input_dir, out, cfg,
            labels_csv=labels_csv,
            jobs=resolve_jobs(jobs),
            degrade=degrade or None,
            dump_noise=dump_noise,
        )
    except (FileNotFoundError, OSError, ValueError) as exc:
        raise click.ClickException(str(exc))
    errors = manifest.summary["errors"]
    click.echo(
        f"extracted {manifest.summary['images'] - errors}/{manifest.summary['images']} images "
        f"-> {out / 'manifest.json'} (config {manifest.config_hash})"
    )
    if errors:
        click.echo(f"{errors} file(s) failed to decode", err=True)
        ctx.exit(DECODE_ERROR_EXIT)


@cli.command()
@click.argument("input_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--iterations", type=int, default=30, show_default=True,
              help="Total passes; the first is warm-up and is excluded.")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("."),
              show_default=True, help="Directory for bench.csv.")
@click.option("--backend", type=click.Choice(["auto", "cython", "numpy"]), default="auto",
              show_default=True, help="Kernel backend to benchmark.")
@config_options
def bench(input_dir, iterations, out, backend, **cfg_flags):
    """Per-stage extraction latency over the images under INPUT_DIR."""
    cfg = build_config(**cfg_flags)
    entries = discover_images(input_dir)
    if not entries:
        raise click.ClickException(f"no images found under {input_dir}")
    previous = _kernels.set_backend(backend)
    try:
        report = run_bench([e.path for e in entries], cfg, iterations,
                           backend=_kernels.backend_name())
    finally:
        _kernels.set_backend(previous)
    out.mkdir(parents=True, exist_ok=True)
    report.to_csv(out / "bench.csv")
    click.echo(report.render())


@cli.command()
@click.argument("input_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option("--axis", required=True, type=click.Choice(sorted(ABLATION_AXES)),
              help="Configuration axis to sweep.")
@click.option("--values", required=True,
              help="Comma-separated axis values, e.g. 16,32 or max,min,random.")
@config_options
@click.option("--labels", "labels_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
def ablate(input_dir, out, axis, values, labels_csv, jobs, **cfg_flags):
    """One extraction pass per axis value, outputs namespaced per value."""
    cfg = build_config(**cfg_flags)
    raw_values = [v.strip() for v in values.split(",") if v.strip()]
    if not raw_values:
        raise click.UsageError("--values is empty")
    parsed = []
    for v in raw_values:
        parsed.append(v if axis == "strategy" else _parse_int(v, axis))
    try:
        results = run_ablation(input_dir, out, axis, parsed, cfg,
                               labels_csv=labels_csv, jobs=resolve_jobs(jobs))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    except (FileNotFoundError, OSError) as exc:
        raise click.ClickException(str(exc))
    for value, manifest in results:
        click.echo(f"{axis}={value}: config {manifest.config_hash}, "
                   f"{manifest.summary['images']} images")


def _parse_int(value: str, axis: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise click.UsageError(f"axis {axis} expects integer values, got {value!r}")


@cli.command()
@click.argument("scores", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--threshold", type=float, default=0.5, show_default=True,
              help="Decision threshold for accuracy.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Optionally write the metrics as JSON.")
def metrics(scores, threshold, out):
    """Accuracy and average precision over a score CSV (id,score,label)."""
    try:
        data = read_scores(scores)
        acc = compute_acc(data.probs, data.labels, threshold)
        ap = compute_ap(data.probs, data.labels)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"images {len(data.ids)} (fake {int(data.labels.sum())}, "
               f"real {int((1 - data.labels).sum())})")
    click.echo(f"acc@{threshold:g} {acc:.6f}")
    click.echo(f"ap {ap:.6f}")
    if out is not None:
        out.write_text(json.dumps(
            {"images": len(data.ids), "threshold": threshold, "acc": acc, "ap": ap},
            indent=2, sort_keys=True) + "\n")


@cli.command()
@click.argument("input_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option("--blur-sigma", type=float, default=None, help="Gaussian blur std-dev.")
@click.option("--jpeg-quality", type=click.IntRange(1, 100), default=None,
              help="JPEG round-trip quality.")
@click.pass_context
def degrade(ctx, input_dir, out, blur_sigma, jpeg_quality):
    """Write degraded PNG copies of every image under INPUT_DIR."""
    if blur_sigma is None and jpeg_quality is None:
        raise click.UsageError("give at least one of --blur-sigma / --jpeg-quality")
    if blur_sigma is not None and blur_sigma < 0:
        raise click.UsageError("--blur-sigma must be >= 0")
    entries = discover_images(input_dir)
    failures = 0
    for entry in entries:
        rel = entry.path.relative_to(input_dir).with_suffix(".png")
        target = out / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        try:
            img = load_image(entry.path)
            if blur_sigma:
                img = degrade_gaussian(img, blur_sigma)
            if jpeg_quality:
                img = degrade_jpeg(img, jpeg_quality)
            save_png(img, target)
        except DecodeError as exc:
            failures += 1
            click.echo(f"skipped {entry.path}: {exc}", err=True)
    click.echo(f"degraded {len(entries) - failures}/{len(entries)} images -> {out}")
    if failures:
        ctx.exit(DECODE_ERROR_EXIT)


def main():
    cli(prog_name="lota")


if __name__ == "__main__":
    main()
