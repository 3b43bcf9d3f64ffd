#!/usr/bin/env python3
"""Benchmark the numba kernels against the numpy/scipy fallback path.

Times the two hot kernels (Sobel L1 magnitude, 8-connected component
counting) and the full per-image ROI profiling step on synthetic palm
images, then prints a table with speedups.

Usage:
    python benchmarks/benchmark_kernels.py
    python benchmarks/benchmark_kernels.py --images 30 --repeats 5
    python benchmarks/benchmark_kernels.py --output results.json
"""

import argparse
import json
import time

import numpy as np

from palmroi import kernels
from palmroi.edges import binarize
from palmroi.roi import RoiParams, _profile_from_mask
from palmroi.synth import PalmModel, SampleJitter, generate_palm, identity_seed_for, sample_seed_for


def make_images(count, seed=42):
    images = []
    for i in range(count):
        model = PalmModel.from_seed(identity_seed_for(seed, i))
        images.append(generate_palm(model, SampleJitter(sample_seed_for(seed, i, 0))))
    return images


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_sobel(images, repeats):
    as_i32 = [img.astype(np.int32) for img in images]

    def run(fn):
        for img in as_i32:
            fn(img)

    numpy_t = time_call(lambda: run(kernels.sobel_l1_numpy), repeats)
    numba_t = (
        time_call(lambda: run(kernels.sobel_l1_numba), repeats)
        if kernels.NUMBA_AVAILABLE
        else float("inf")
    )
    return numba_t, numpy_t


def bench_components(images, repeats, threshold=96):
    masks = [
        np.ascontiguousarray(binarize(kernels.sobel_l1_numpy(img.astype(np.int32)), threshold))
        for img in images
    ]

    def run(fn):
        for mask in masks:
            fn(mask)

    numpy_t = time_call(lambda: run(kernels.count_components_numpy), repeats)
    numba_t = (
        time_call(lambda: run(kernels.count_components_numba), repeats)
        if kernels.NUMBA_AVAILABLE
        else float("inf")
    )
    return numba_t, numpy_t


def bench_strip_profiles(images, repeats, threshold=96):
    """Per-image strip profiling (the dominant step of ROI extraction)."""
    params = RoiParams(edge_threshold=threshold)

    def run(sobel, count):
        saved = kernels.sobel_l1, kernels.count_components
        kernels.sobel_l1, kernels.count_components = sobel, count
        try:
            for img in images:
                mask = binarize(sobel(img.astype(np.int32)), threshold)
                _profile_from_mask(mask, "horizontal", params)
                _profile_from_mask(mask, "vertical", params)
        finally:
            kernels.sobel_l1, kernels.count_components = saved
    numpy_t = time_call(
        lambda: run(kernels.sobel_l1_numpy, kernels.count_components_numpy), repeats
    )
    numba_t = (
        time_call(lambda: run(kernels.sobel_l1_numba, kernels.count_components_numba), repeats)
        if kernels.NUMBA_AVAILABLE
        else float("inf")
    )
    return numba_t, numpy_t


def main():
    parser = argparse.ArgumentParser(description="numba vs numpy kernel benchmark")
    parser.add_argument("--images", type=int, default=20, help="synthetic palms per run")
    parser.add_argument("--repeats", type=int, default=5, help="repeats (best time wins)")
    parser.add_argument("--output", help="also write results as JSON")
    args = parser.parse_args()

    print(f"numba available: {kernels.NUMBA_AVAILABLE}")
    images = make_images(args.images)
    print(f"{args.images} images of {images[0].shape[1]}x{images[0].shape[0]}\n")

    if kernels.NUMBA_AVAILABLE:
        # trigger JIT compilation outside the timed region
        warm = images[0].astype(np.int32)
        kernels.sobel_l1_numba(warm)
        kernels.count_components_numba(np.ascontiguousarray(warm > 128))

    rows = []
    for name, fn in (
        ("sobel L1", bench_sobel),
        ("components", bench_components),
        ("strip profiles", bench_strip_profiles),
    ):
        numba_t, numpy_t = fn(images, args.repeats)
        speedup = numpy_t / numba_t if numba_t > 0 else 0.0
        rows.append({"kernel": name, "numba_s": numba_t, "numpy_s": numpy_t, "speedup": speedup})

    print(f"{'kernel':>16} {'numba (s)':>12} {'numpy (s)':>12} {'speedup':>9}")
    print("-" * 53)
    for row in rows:
        numba_text = f"{row['numba_s']:.4f}" if row["numba_s"] != float("inf") else "n/a"
        print(f"{row['kernel']:>16} {numba_text:>12} {row['numpy_s']:>12.4f} {row['speedup']:>8.1f}x")

    if args.output:
        with open(args.output, "w") as fh:
            json.dump({"images": args.images, "repeats": args.repeats, "results": rows}, fh, indent=2)
        print(f"\nwrote {args.output}")


if __name__ == "__main__":
    main()
