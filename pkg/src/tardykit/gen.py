"""Deterministic instance generators.

Every generator consumes a `SplitMix64` stream seeded by the caller, so
a (kind, parameters, seed) triple fully determines the output.  Draw
order is part of the format: processing times first (in job order),
then due dates.
"""
from __future__ import annotations

import numpy as np

from .model import Instance, Job
from .rng import SplitMix64
from .skewconv import SkewedConvInput

# Worked example vectors used throughout the fast-convolution tests.
FIGURE1_A = (5, 6, 4, 9, 1, 7, 3, 8, 2)
FIGURE1_B = (8, 4, 1, 2, 3, 7, 6, 5, 9)


def uniform_jobs(n: int, p_max: int, seed: int, machines: int = 1) -> Instance:
    """p ~ U[1, p_max]; d ~ U[0, P] with P the realized total volume."""
    rng = SplitMix64(seed)
    ps = [rng.randint(1, p_max) for _ in range(n)]
    total = sum(ps)
    ds = [rng.randint(0, total) for _ in range(n)]
    return Instance(tuple(Job(p, d) for p, d in zip(ps, ds)), machines=machines)


def tight_deadlines(n: int, p_max: int, seed: int, machines: int = 1) -> Instance:
    """Contended instances: d ~ U[P/4, P/2], so roughly half the volume
    must be tardy and the solvers' windows actually matter."""
    rng = SplitMix64(seed)
    ps = [rng.randint(1, p_max) for _ in range(n)]
    total = sum(ps)
    lo, hi = total // 4, max(total // 4, total // 2)
    ds = [rng.randint(lo, hi) for _ in range(n)]
    return Instance(tuple(Job(p, d) for p, d in zip(ps, ds)), machines=machines)


def conv_random(n: int, bound: int, seed: int, skew: str = "random") -> SkewedConvInput:
    """Vectors in [-bound, bound]; skew is 'random', 'zero', or 'identity'."""
    rng = SplitMix64(seed)
    a = [rng.randint(-bound, bound) for _ in range(n)]
    b = [rng.randint(-bound, bound) for _ in range(n)]
    if skew == "zero":
        d = [0] * (2 * n - 1)
    elif skew == "identity":
        d = list(range(2 * n - 1))
    elif skew == "random":
        d = [rng.randint(-bound, bound) for _ in range(2 * n - 1)]
    else:
        raise ValueError(f"unknown skew kind {skew!r}")
    return SkewedConvInput(np.array(a), np.array(b), np.array(d))


def conv_figure1() -> SkewedConvInput:
    """The fixed 9-element worked-example vectors, zero skew."""
    return SkewedConvInput(
        np.array(FIGURE1_A), np.array(FIGURE1_B), np.zeros(17, dtype=np.int64)
    )
