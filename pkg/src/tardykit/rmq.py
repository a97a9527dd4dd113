"""Static range-minimum queries over an integer array.

Sparse-table scheme: O(n log n) precompute, O(1) per query.  Queries are
over half-open index ranges [lo, hi); an empty range returns +infinity
(as a Python int sentinel) so callers can treat it as vacuously fine.
"""
from __future__ import annotations

import numpy as np

_INF = float("inf")


class RangeMin:
    def __init__(self, values):
        arr = np.asarray(values, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("RangeMin expects a 1-d array")
        self.n = arr.size
        levels = [arr]
        length = 1
        while 2 * length <= self.n:
            prev = levels[-1]
            count = self.n - 2 * length + 1
            levels.append(np.minimum(prev[:count], prev[length : length + count]))
            length *= 2
        self._levels = levels

    def query(self, lo: int, hi: int):
        """Minimum of values[lo:hi]; +inf when the range is empty."""
        if lo < 0 or hi > self.n:
            raise IndexError(f"range [{lo}, {hi}) out of bounds for n = {self.n}")
        if hi <= lo:
            return _INF
        span = hi - lo
        level = span.bit_length() - 1
        length = 1 << level
        table = self._levels[level]
        return int(min(table[lo], table[hi - length]))
