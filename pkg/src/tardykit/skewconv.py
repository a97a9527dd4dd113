"""Max-min skewed convolution: c[k] = max_{i+j=k} min(a[i], b[j] + d[k]).

The subquadratic algorithm works in three stages:

1. Perturb the inputs so all values are pairwise distinct: multiply
   everything (including the skew vector) by 4n, then add offset i to
   a[i] and offset n + j to b[j].  Flooring the outputs by 4n undoes it.
2. Preprocessing: conceptually, for each output index k there is a
   boolean dominance matrix over (a-value, b-value) thresholds whose
   rows and columns, once sorted by value, are nonincreasing.  Only the
   entries at every g-th sorted row and column (g = floor(n/p)) are
   materialized, for all k at once, via thresholded 0/1 convolutions.
3. Per output index, the answer is found by binary search over the 2n
   candidate values (the a-values and the d[k]-shifted b-values) using a
   predicate "c[k] > v?" that reads one sampled grid bit and, when that
   is inconclusive, scans the at most 2*ceil(n/p) witness candidates
   between the query cell and the sampled corner.

With p ~ n^(1/3) the preprocessing costs O(p^2 * n log n) and the query
phase O(n log n * n/p), balancing at O(n^(5/3) log n) total.

The module also ships the quadratic reference implementation
(`naive_skewed_convolution`), which doubles as the oracle in the test
suite, and the plain max-min convolution as the d = 0 special case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft as _fft

from .errors import MagnitudeError

# Documented magnitude contract: individual values up to 2^40 in absolute
# value and n up to 2^20, with the extra requirement that the perturbed
# sums 4n*(b[j] + d[k]) stay inside signed 64-bit range (the vectorized
# paths do this addition in int64).
VALUE_BOUND = 1 << 40
N_BOUND = 1 << 20
_I64_MAX = np.iinfo(np.int64).max


def _as_int_vector(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-d integer vector")
    return arr


@dataclass(frozen=True)
class SkewedConvInput:
    """Vectors a, b of equal length n and a skew vector d over k.

    d must have at least 2n - 1 entries; entries beyond index 2n - 2 are
    ignored (that output index has no (i, j) pair).
    """

    a: np.ndarray
    b: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        a = _as_int_vector(self.a, "a")
        b = _as_int_vector(self.b, "b")
        d = _as_int_vector(self.d, "d")
        if a.size == 0 or a.size != b.size:
            raise ValueError("a and b must be nonempty and of equal length")
        if d.size < 2 * a.size - 1:
            raise ValueError("d must have at least 2n - 1 entries")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d[: 2 * a.size - 1])

    @property
    def n(self) -> int:
        return self.a.size


def maxmin_input(a, b) -> SkewedConvInput:
    """Input with d = 0: the ordinary max-min convolution."""
    a = _as_int_vector(a, "a")
    return SkewedConvInput(a, b, np.zeros(2 * a.size - 1, dtype=np.int64))


def identity_skew_input(a, b) -> SkewedConvInput:
    """Input with d[k] = k, the skew arising from tardy-job scheduling."""
    a = _as_int_vector(a, "a")
    return SkewedConvInput(a, b, np.arange(2 * a.size - 1, dtype=np.int64))


def naive_skewed_convolution(inp: SkewedConvInput) -> np.ndarray:
    """Quadratic reference evaluation, the oracle for the fast path."""
    a, b, d = inp.a, inp.b, inp.d
    n = inp.n
    c = np.empty(2 * n - 1, dtype=np.int64)
    for k in range(2 * n - 1):
        lo = max(0, k - n + 1)
        hi = min(k, n - 1)
        ai = a[lo : hi + 1]
        bj = b[k - hi : k - lo + 1][::-1]
        c[k] = np.minimum(ai, bj + d[k]).max()
    return c


@dataclass(frozen=True)
class PerturbedInput:
    """Distinct-valued copies of (a, b, d) and the map back.

    a_pert[i] = 4n*a[i] + i and b_pert[j] = 4n*b[j] + n + j, so all 2n
    values are pairwise distinct; d is scaled by 4n with no offset.
    Because every offset lies in [0, 2n) and the scale is 4n, flooring
    any output by 4n recovers the unperturbed result.
    """

    a_pert: np.ndarray
    b_pert: np.ndarray
    d_pert: np.ndarray
    scale: int

    def decode(self, c_pert) -> np.ndarray:
        return np.floor_divide(np.asarray(c_pert, dtype=np.int64), self.scale)


def perturb(inp: SkewedConvInput) -> PerturbedInput:
    """Scale by 4n and add distinct offsets (0..n-1 to a, n..2n-1 to b)."""
    n = inp.n
    if n > N_BOUND:
        raise MagnitudeError(f"n = {n} exceeds the supported bound {N_BOUND}")
    max_ab = max(int(np.abs(inp.a).max()), int(np.abs(inp.b).max()))
    max_d = int(np.abs(inp.d).max()) if inp.d.size else 0
    if max(max_ab, max_d) > VALUE_BOUND or 4 * n * (max_ab + max_d) + 2 * n >= 2**63:
        raise MagnitudeError(
            "input values too large for exact 64-bit perturbed arithmetic"
        )
    scale = 4 * n
    a_pert = inp.a * scale + np.arange(n, dtype=np.int64)
    b_pert = inp.b * scale + np.arange(n, 2 * n, dtype=np.int64)
    d_pert = inp.d * scale
    return PerturbedInput(a_pert, b_pert, d_pert, scale)


class GridStructure:
    """Sampled dominance bits shared by all per-k queries.

    For sorted-position thresholds (u, w) = (r-th smallest a-value, s-th
    smallest b-value) at sampled positions r, s, and every output index
    k, one stored bit answers: does some pair i' + j' = k have
    a[i'] >= u and b[j'] >= w?  Bits are packed along k.

    Sampled positions are g-1, 2g-1, ... with g = floor(n/p); when n is
    not a multiple of g the final rows/columns form a residual strip with
    no sampled corner, handled by the witness scan in queries.
    """

    def __init__(self, a, b, p: int, d=None):
        a = _as_int_vector(a, "a")
        b = _as_int_vector(b, "b")
        n = a.size
        if b.size != n or n == 0:
            raise ValueError("a and b must be nonempty and of equal length")
        if not (1 <= p <= n):
            raise ValueError(f"grid parameter p = {p} out of range [1, {n}]")
        if np.unique(a).size != n or np.unique(b).size != n:
            raise ValueError("grid requires pairwise distinct values per vector")
        self.n = n
        self.p = p
        self.num_k = 2 * n - 1
        if d is None:
            d = np.zeros(self.num_k, dtype=np.int64)
        d = _as_int_vector(d, "d")
        if d.size < self.num_k:
            raise ValueError("d must have at least 2n - 1 entries")
        self.d = d[: self.num_k]
        self.a_orig = a
        self.b_orig = b
        self.order_a = np.argsort(a, kind="stable")
        self.order_b = np.argsort(b, kind="stable")
        self._order_a32 = self.order_a.astype(np.int32)
        self._order_b32 = self.order_b.astype(np.int32)
        self.values_a = a[self.order_a]
        self.values_b = b[self.order_b]
        self.gap = n // p
        self.rows_pos = np.arange(self.gap - 1, n, self.gap, dtype=np.int64)
        self.cols_pos = self.rows_pos.copy()
        self._build_samples()

    def _build_samples(self):
        """FFT pass: one transform per sampled row/column, one product per pair."""
        n, num_k = self.n, self.num_k
        rank_a = np.empty(n, dtype=np.int64)
        rank_a[self.order_a] = np.arange(n)
        rank_b = np.empty(n, dtype=np.int64)
        rank_b[self.order_b] = np.arange(n)
        m = _fft.next_fast_len(num_k, real=True)
        spectra_a = np.stack(
            [
                _fft.rfft((rank_a >= pos).astype(np.float64), m)
                for pos in self.rows_pos
            ]
        )
        spectra_b = np.stack(
            [
                _fft.rfft((rank_b >= pos).astype(np.float64), m)
                for pos in self.cols_pos
            ]
        )
        nbytes = (num_k + 7) // 8
        samples = np.empty((len(self.rows_pos), len(self.cols_pos), nbytes), dtype=np.uint8)
        for ri in range(len(self.rows_pos)):
            counts = _fft.irfft(spectra_a[ri][None, :] * spectra_b, m, axis=1)[:, :num_k]
            samples[ri] = np.packbits(counts >= 0.5, axis=1)
        self.samples = samples

    @property
    def num_rows(self) -> int:
        return len(self.rows_pos)

    @property
    def num_cols(self) -> int:
        return len(self.cols_pos)

    def sample_bit(self, ri: int, si: int, k: int) -> bool:
        byte = self.samples[ri, si, k >> 3]
        return bool((byte >> (7 - (k & 7))) & 1)

    def sample_bits(self, ri: int, si: int) -> np.ndarray:
        """All stored bits for one sampled grid point, as a bool array over k."""
        return np.unpackbits(self.samples[ri, si])[: self.num_k].astype(bool)

    def _bits_at(self, ri, si, ks) -> np.ndarray:
        byte = self.samples[ri, si, ks >> 3]
        return ((byte >> (7 - (ks & 7))) & 1).astype(bool)


def precompute_grid(a, b, p: int, d=None) -> GridStructure:
    """Build the sampled dominance-bit structure for distinct-valued a, b."""
    return GridStructure(a, b, p, d)


def query_ck_gt_v(grid: GridStructure, k: int, v: int) -> bool:
    """Decide whether c[k] > v in the value space the grid was built on.

    Runs in O(log n) for the two threshold searches plus O(n/p) for the
    witness scan when the sampled corner bit is zero or absent.
    """
    n = grid.n
    if not (0 <= k <= 2 * n - 2):
        raise ValueError(f"k = {k} out of range [0, {2 * n - 2}]")
    va, vb = grid.values_a, grid.values_b
    i_pos = int(np.searchsorted(va, v, side="right"))
    if i_pos == n:
        return False
    j_pos = int(np.searchsorted(vb, v - int(grid.d[k]), side="right"))
    if j_pos == n:
        return False
    g = grid.gap
    ri, si = i_pos // g, j_pos // g
    in_grid = ri < grid.num_rows and si < grid.num_cols
    if in_grid and grid.sample_bit(ri, si, k):
        return True
    row_end = int(grid.rows_pos[ri]) if ri < grid.num_rows else n
    col_end = int(grid.cols_pos[si]) if si < grid.num_cols else n
    thr_a = int(va[i_pos])
    thr_b = int(vb[j_pos])
    a_orig, b_orig = grid.a_orig, grid.b_orig
    for pos in range(i_pos, row_end):
        jp = k - int(grid.order_a[pos])
        if 0 <= jp < n and int(b_orig[jp]) >= thr_b:
            return True
    for pos in range(j_pos, col_end):
        ip = k - int(grid.order_b[pos])
        if 0 <= ip < n and int(a_orig[ip]) >= thr_a:
            return True
    return False


def _query_batch(grid: GridStructure, ks: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Vectorized form of `query_ck_gt_v` for parallel binary searches."""
    n = grid.n
    g = grid.gap
    va, vb = grid.values_a, grid.values_b
    res = np.zeros(ks.size, dtype=bool)
    i_pos = np.searchsorted(va, vs, side="right")
    j_pos = np.searchsorted(vb, vs - grid.d[ks], side="right")
    alive = (i_pos < n) & (j_pos < n)
    ri = np.where(alive, i_pos // g, 0)
    si = np.where(alive, j_pos // g, 0)
    in_grid = alive & (ri < grid.num_rows) & (si < grid.num_cols)
    if in_grid.any():
        res[in_grid] = grid._bits_at(ri[in_grid], si[in_grid], ks[in_grid])
    need = alive & ~res
    if not need.any():
        return res
    idx = np.nonzero(need)[0]
    row_end = np.where(ri[idx] < grid.num_rows, (ri[idx] + 1) * g - 1, n)
    col_end = np.where(si[idx] < grid.num_cols, (si[idx] + 1) * g - 1, n)
    hits = _scan_side(grid, "a", ks[idx], i_pos[idx], row_end, vb[j_pos[idx]])
    miss = ~hits
    if miss.any():
        hits[miss] |= _scan_side(
            grid, "b", ks[idx[miss]], j_pos[idx][miss], col_end[miss], va[i_pos[idx]][miss]
        )
    res[idx] = hits
    return res


def _scan_side(grid, side: str, ks, start, end, thr) -> np.ndarray:
    """Witness scan of one axis for a batch of queries.

    Each query scans the sorted positions [start, end) of its own axis
    and tests the partner value at index k - (scanned original index)
    against the partner threshold.  Queries are processed in span-sorted
    chunks so the padded rectangles stay tight.
    """
    n = grid.n
    if side == "a":
        order, partner_vals = grid._order_a32, grid.b_orig
    else:
        order, partner_vals = grid._order_b32, grid.a_orig
    hit = np.zeros(ks.size, dtype=bool)
    span = end - start
    active = np.nonzero(span > 0)[0]
    if active.size == 0:
        return hit
    active = active[np.argsort(span[active], kind="stable")]
    budget = 4_000_000
    c0 = 0
    while c0 < active.size:
        width = int(span[active[c0]])
        c1 = min(active.size, c0 + max(1, budget // max(width, 1)))
        sl = active[c0:c1]
        width = int(span[sl[-1]])
        offs = np.arange(width, dtype=np.int32)
        pos = start[sl].astype(np.int32)[:, None] + offs[None, :]
        valid = offs[None, :] < span[sl][:, None]
        own = order[np.where(valid, pos, 0)]
        partner = ks[sl].astype(np.int32)[:, None] - own
        valid &= (partner >= 0) & (partner < n)
        vals = partner_vals.take(np.where(valid, partner, 0))
        hit[sl] = (valid & (vals >= thr[sl][:, None])).any(axis=1)
        c0 = c1
    return hit


def _candidates_from_search(grid: GridStructure, side: str) -> np.ndarray:
    """Per-k smallest candidate value of one side whose predicate is false.

    Lockstep binary search across all k over the sorted candidate list of
    that side (a-values, or b-values shifted by d[k]).  Returns int64 with
    a sentinel of int64 max where the whole side still satisfies c[k] > v.
    """
    n = grid.n
    num_k = grid.num_k
    ks = np.arange(num_k, dtype=np.int64)
    lo = np.zeros(num_k, dtype=np.int64)
    hi = np.full(num_k, n, dtype=np.int64)
    while True:
        active = lo < hi
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        mid = (lo[idx] + hi[idx]) >> 1
        if side == "a":
            vs = grid.values_a[mid]
        else:
            vs = grid.values_b[mid] + grid.d[idx]
        gt = _query_batch(grid, idx, vs)
        lo[idx[gt]] = mid[gt] + 1
        hi[idx[~gt]] = mid[~gt]
    first_false = lo
    exists = first_false < n
    out = np.full(num_k, _I64_MAX, dtype=np.int64)
    if side == "a":
        out[exists] = grid.values_a[first_false[exists]]
    else:
        out[exists] = grid.values_b[first_false[exists]] + grid.d[ks[exists]]
    return out


def _solve_on_grid(grid: GridStructure) -> np.ndarray:
    """All outputs c[k] for the vectors the grid was built on.

    c[k] is the smallest candidate v with "c[k] > v" false; candidates on
    each side form a sorted list, so two lockstep binary searches find the
    first-false candidate per side and the answer is their minimum.
    """
    cand_a = _candidates_from_search(grid, "a")
    cand_b = _candidates_from_search(grid, "b")
    c = np.minimum(cand_a, cand_b)
    if (c == _I64_MAX).any():
        raise AssertionError("binary search found no candidate; grid is inconsistent")
    return c


def default_grid_parameter(n: int) -> int:
    """ceil(n^(1/3)), the balance point of preprocessing and query work."""
    p = max(1, round(n ** (1.0 / 3.0)))
    while p**3 < n:
        p += 1
    while p > 1 and (p - 1) ** 3 >= n:
        p -= 1
    return p


def skewed_maxmin_convolution(inp: SkewedConvInput, p: int | None = None) -> np.ndarray:
    """Exact max-min skewed convolution in O(n^(5/3) log n).

    Output has length 2n - 1 (indices k = 0 .. 2n - 2) and equals
    `naive_skewed_convolution` entry for entry.
    """
    n = inp.n
    if p is None:
        p = default_grid_parameter(n)
    p = min(max(1, p), n)
    pert = perturb(inp)
    grid = precompute_grid(pert.a_pert, pert.b_pert, p, d=pert.d_pert)
    return pert.decode(_solve_on_grid(grid))


def maxmin_convolution(a, b, p: int | None = None) -> np.ndarray:
    """Plain max-min convolution: the d = 0 case of the skewed algorithm."""
    return skewed_maxmin_convolution(maxmin_input(a, b), p=p)
