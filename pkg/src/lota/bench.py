"""Per-stage latency benchmark for the extraction pipeline.

Each iteration decodes and extracts every input image, recording stage wall
times. The first iteration is discarded as warm-up; statistics are reported
in milliseconds over the remaining samples.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .pipeline import PipelineConfig, extract, load_image, _now_us

STAGES = ("decode", "noise", "resize", "score", "error_extract", "total")

# Error-extraction latency reported for the original LOTA implementation on
# a 512x512 image; printed next to the measured median for comparison.
REFERENCE_ERROR_EXTRACT_MS = 1.52


@dataclass
class BenchReport:
    iterations: int
    images: int
    backend: str
    samples: dict[str, list[float]] = field(default_factory=dict)  # stage -> microseconds

    @property
    def warm_samples(self) -> int:
        return len(self.samples.get("total", []))

    def stats(self) -> dict[str, dict[str, float]]:
        """stage -> mean/median/p95 in milliseconds (empty when no warm samples)."""
        out = {}
        for stage in STAGES:
            values = self.samples.get(stage, [])
            if not values:
                continue
            ordered = sorted(values)
            p95 = ordered[min(len(ordered) - 1, int(0.95 * (len(ordered) - 1) + 0.5))]
            out[stage] = {
                "mean_ms": statistics.fmean(values) / 1000.0,
                "median_ms": statistics.median(values) / 1000.0,
                "p95_ms": p95 / 1000.0,
                "samples": float(len(values)),
            }
        return out

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["stage", "samples", "mean_ms", "median_ms", "p95_ms"])
            for stage, row in self.stats().items():
                writer.writerow(
                    [
                        stage,
                        int(row["samples"]),
                        f"{row['mean_ms']:.6f}",
                        f"{row['median_ms']:.6f}",
                        f"{row['p95_ms']:.6f}",
                    ]
                )

    def render(self) -> str:
        lines = [
            f"backend={self.backend} images={self.images} "
            f"iterations={self.iterations} (first discarded as warm-up)"
        ]
        stats = self.stats()
        if not stats:
            lines.append(
                "no warm samples: need at least 2 iterations "
                "(iteration 1 is the warm-up and is excluded)"
            )
            return "\n".join(lines)
        lines.append(f"{'stage':<15}{'mean ms':>10}{'median ms':>12}{'p95 ms':>10}")
        for stage, row in stats.items():
            lines.append(
                f"{stage:<15}{row['mean_ms']:>10.3f}{row['median_ms']:>12.3f}{row['p95_ms']:>10.3f}"
            )
        median_ms = stats["error_extract"]["median_ms"]
        lines.append(
            f"error extraction median {median_ms:.3f} ms "
            f"(original implementation reference: {REFERENCE_ERROR_EXTRACT_MS:.2f} ms)"
        )
        return "\n".join(lines)


def run_bench(paths, cfg: PipelineConfig, iterations: int, *, backend: str = "active") -> BenchReport:
    """Time every stage over ``iterations`` passes (first pass excluded)."""
    cfg.validate()
    paths = [Path(p) for p in paths]
    if not paths:
        raise ValueError("benchmark needs at least one decodable image")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")

    report = BenchReport(iterations=iterations, images=len(paths), backend=backend)
    samples: dict[str, list[float]] = {stage: [] for stage in STAGES}
    for iteration in range(iterations):
        for path in paths:
            t0 = _now_us()
            img = load_image(path)
            t1 = _now_us()
            _, record = extract(img, cfg)
            t2 = _now_us()
            if iteration == 0:
                continue
            timings = record.timings
            samples["decode"].append(t1 - t0)
            samples["noise"].append(timings.noise_us)
            samples["resize"].append(timings.resize_us)
            samples["score"].append(timings.score_us)
            samples["error_extract"].append(timings.extract_us)
            samples["total"].append(t2 - t0)
    report.samples = {k: v for k, v in samples.items() if v}
    return report
