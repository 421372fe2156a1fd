#!/usr/bin/env python3
"""Compare the compiled kernels against the numpy fallback.

Times the two hot kernels and the full extraction on a synthetic 512x512
image (or a real one, if a path is given).

Usage: python benchmarks/compare_backends.py [image.png] [--repeats N]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from lota import PipelineConfig, extract, load_image, _kernels


def time_call(fn, repeats: int) -> float:
    """Median wall time in milliseconds over ``repeats`` calls (1 warm-up)."""
    fn()
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        fn()
        samples.append((time.perf_counter_ns() - t0) / 1e6)
    return statistics.median(samples)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("image", nargs="?", default=None, help="optional input image")
    parser.add_argument("--repeats", type=int, default=40)
    args = parser.parse_args()

    if args.image:
        img = load_image(args.image)
    else:
        img = np.random.default_rng(0).integers(0, 256, (512, 512, 3), dtype=np.uint8)

    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("note: compiled extension not built, only the numpy fallback is measured")

    cfg = PipelineConfig()
    rows = []
    for name, impl in sorted(backends.items()):
        noise = impl.lowbit_noise(img, 3, True)
        t_noise = time_call(lambda: impl.lowbit_noise(img, 3, True), args.repeats)
        t_scale = time_call(lambda: impl.lowbit_noise(img, 3, False), args.repeats)
        t_score = time_call(lambda: impl.score_grid(noise, 32), args.repeats)
        previous = _kernels.set_backend(name)
        try:
            t_extract = time_call(lambda: extract(img, cfg), args.repeats)
        finally:
            _kernels.set_backend(previous)
        rows.append((name, t_noise, t_scale, t_score, t_extract))

    h, w = img.shape[:2]
    print(f"image {w}x{h}, median of {args.repeats} runs, milliseconds")
    print(f"{'backend':<10}{'noise(thr)':>12}{'noise(scl)':>12}{'score_grid':>12}{'extract':>10}")
    for name, t_noise, t_scale, t_score, t_extract in rows:
        print(f"{name:<10}{t_noise:>12.3f}{t_scale:>12.3f}{t_score:>12.3f}{t_extract:>10.3f}")
    if len(rows) == 2:
        by_name = {r[0]: r for r in rows}
        speedup = by_name["numpy"][4] / by_name["cython"][4]
        print(f"end-to-end speedup cython vs numpy: {speedup:.2f}x")


if __name__ == "__main__":
    main()
