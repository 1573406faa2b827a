"""Scoring microbenchmarks: wall-clock medians for batched score-grid
computation per classifier variant and dimension.

Views are pre-generated random matrices so the measurement isolates
classifier cost from encoding; the grid covers tokens x tokens head
candidate pairs, mirroring what one parsing pass evaluates per
sentence batch.  One warm-up round is excluded from the timings.
"""

from __future__ import annotations

import contextlib
import csv
import io
import math
import statistics
import time
from dataclasses import dataclass

import numpy as np

from .scoring import VARIANTS, ArcClassifier

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover
    threadpool_limits = None


def _single_threaded_blas():
    """BLAS thread count varies with matrix size; pin it while timing."""
    if threadpool_limits is None:
        return contextlib.nullcontext()
    return threadpool_limits(limits=1)


@dataclass
class BenchRow:
    variant: str
    dim: int
    tokens: int
    pairs: int
    repeats: int
    median_sec: float


def time_grid(variant: str, dim: int, tokens: int, repeats: int,
              rng: np.random.Generator) -> BenchRow:
    """Median wall-clock seconds to score one tokens x tokens grid."""
    clf = ArcClassifier(variant, dim)
    params = clf.init_params(rng, init_scale=0.1)
    vh = rng.normal(size=(tokens, dim))
    vd = rng.normal(size=(tokens, dim))
    times = []
    with _single_threaded_blas():
        for _ in range(3):  # warm-up: caches, FFT twiddle tables
            clf.grid_values(params, vh, vd)
        for _ in range(repeats):
            t0 = time.perf_counter()
            clf.grid_values(params, vh, vd)
            times.append(time.perf_counter() - t0)
    return BenchRow(variant, dim, tokens, tokens * tokens, repeats,
                    statistics.median(times))


def run_bench(dims: list[int], variants: list[str] | None = None,
              repeats: int = 9, pairs: int = 10_000,
              seed: int = 0) -> list[BenchRow]:
    """Benchmark every (variant, dim) pair; grids sized to >= `pairs` pairs."""
    variants = list(variants or VARIANTS)
    for v in variants:
        if v not in VARIANTS:
            raise ValueError(f"unknown classifier variant {v!r}")
    if any(d < 2 for d in dims):
        raise ValueError("bench: dims must be >= 2")
    tokens = math.isqrt(pairs - 1) + 1 if pairs > 1 else 1
    rng = np.random.default_rng(seed)
    rows = []
    for dim in dims:
        for variant in variants:
            rows.append(time_grid(variant, dim, tokens, repeats, rng))
    return rows


def bench_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["variant", "dim", "tokens", "pairs", "repeats", "median_sec"])
    for r in rows:
        writer.writerow([r.variant, r.dim, r.tokens, r.pairs, r.repeats,
                         f"{r.median_sec:.6f}"])
    return buf.getvalue()
