"""Exact integer convolution of 0/1 indicator vectors.

The counts are computed with a real FFT in float64 and rounded to the
nearest integer.  With 0/1 inputs every true output count lies in
[0, min(|a|, |b|)], so exactness reduces to keeping the accumulated
floating-point error below 1/2.  The worst-case error of an FFT-based
convolution is bounded by roughly ``3 * eps * log2(m) * ||a||_2 * ||b||_2``
(Percival-style analysis); for indicator vectors of length up to 2^22
padded to m <= 2^23 this is below 3e-8, leaving a margin of more than six
orders of magnitude.  ``MAX_EXACT_LEN`` enforces that bound.
"""
from __future__ import annotations

import numpy as np
from scipy import fft as _fft

from .errors import MagnitudeError

# Largest input length for which the rounded FFT counts are provably exact.
MAX_EXACT_LEN = 1 << 22


def binary_convolution(a01, b01) -> np.ndarray:
    """Exact (+, *) convolution of two 0/1 vectors.

    Returns an int64 array ``c`` of length ``|a01| + |b01| - 1`` with
    ``c[k] = sum_{i+j=k} a01[i] * b01[j]``.
    """
    a = np.asarray(a01, dtype=np.int64)
    b = np.asarray(b01, dtype=np.int64)
    if a.ndim != 1 or b.ndim != 1 or a.size == 0 or b.size == 0:
        raise ValueError("inputs must be nonempty 1-d vectors")
    if not (np.isin(a, (0, 1)).all() and np.isin(b, (0, 1)).all()):
        raise ValueError("inputs must be 0/1 indicator vectors")
    if a.size > MAX_EXACT_LEN or b.size > MAX_EXACT_LEN:
        raise MagnitudeError(
            f"input length exceeds the exactness bound {MAX_EXACT_LEN}"
        )
    out_len = a.size + b.size - 1
    m = _fft.next_fast_len(out_len, real=True)
    fa = _fft.rfft(a.astype(np.float64), m)
    fb = _fft.rfft(b.astype(np.float64), m)
    counts = _fft.irfft(fa * fb, m)[:out_len]
    return np.rint(counts).astype(np.int64)


def pair_existence(a, b, u: int, w: int) -> np.ndarray:
    """For every k, whether some i' + j' = k has a[i'] >= u and b[j'] >= w.

    Returns a boolean array over k = 0 .. |a| + |b| - 2, computed by
    thresholding both vectors and convolving the indicators.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    counts = binary_convolution((a >= u).astype(np.int64), (b >= w).astype(np.int64))
    return counts > 0
