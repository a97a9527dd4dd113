"""Wall-time scaling harness.

Times the fast skewed convolution (suite "conv") or the parameterized
single-machine solver (suite "sched") across a size sweep, reports the
median per size, and fits a log-log slope.  The slope is informational:
the convolution's theory curve is n^(5/3) log n, so anything clearly
below 2.0 is consistent with subquadratic behavior.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import gen
from .single_machine import pmax_cubed_solve
from .skewconv import skewed_maxmin_convolution

CONV_DEFAULT_SIZES = (4096, 8192, 16384, 32768, 65536)
SCHED_DEFAULT_SIZES = (2000, 4000, 8000, 16000, 32000)


@dataclass(frozen=True)
class BenchReport:
    suite: str
    sizes: tuple[int, ...]
    median_ms: tuple[float, ...]
    slope: float

    def to_csv(self) -> str:
        lines = ["size,median_ms,slope"]
        for size, ms in zip(self.sizes, self.median_ms):
            lines.append(f"{size},{ms:.3f},{self.slope:.4f}")
        return "\n".join(lines) + "\n"


def _median_time(fn, reps: int) -> float:
    times = []
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        times.append((time.perf_counter() - start) * 1000.0)
    times.sort()
    return times[len(times) // 2]


def run_bench(suite: str, sizes=None, reps: int = 3, seed: int = 1, p_max: int = 32) -> BenchReport:
    if suite == "conv":
        sizes = tuple(sizes or CONV_DEFAULT_SIZES)
        medians = []
        for i, n in enumerate(sizes):
            inp = gen.conv_random(n, bound=10**6, seed=seed + i)
            medians.append(_median_time(lambda: skewed_maxmin_convolution(inp), reps))
    elif suite == "sched":
        sizes = tuple(sizes or SCHED_DEFAULT_SIZES)
        medians = []
        for i, n in enumerate(sizes):
            inst = gen.uniform_jobs(n, p_max, seed=seed + i)
            medians.append(_median_time(lambda: pmax_cubed_solve(inst), reps))
    else:
        raise ValueError(f"unknown bench suite {suite!r}")
    slope = fit_loglog_slope(sizes, medians)
    return BenchReport(suite=suite, sizes=sizes, median_ms=tuple(medians), slope=slope)


def fit_loglog_slope(sizes, times_ms) -> float:
    xs = np.log(np.asarray(sizes, dtype=float))
    ys = np.log(np.maximum(np.asarray(times_ms, dtype=float), 1e-9))
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)
