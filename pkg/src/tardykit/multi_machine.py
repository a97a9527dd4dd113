"""Identical-machines generalization: minimize tardy volume on m machines.

Dynamic program over per-machine load patterns.  After deciding a prefix
of jobs (in due-date order), only the multiset of machine loads matters,
and an exchange argument shows some optimal schedule keeps every load
within O(p_max^2) of a per-prefix anchor value

    anchor(j) = min_{j' > j} ( d_{j'} - (1/m) * sum_{j''=j+1..j'} p_{j''} ),

so the pattern space per prefix is p_max^O(m).  Anchors are kept exact
by scaling them (and the window comparisons) by m.  Loads that sink
below the window mean everything remaining fits greedily, which caps
the achievable volume immediately; loads above it are never needed.

Both window edges are clamped at zero: the raw anchor can dive far
negative when late jobs are hopeless (e.g. many due-0 jobs), while real
loads are nonnegative and bear no relation to it; the exchange argument
only bites above max(0, anchor).

`brute_force_multi` enumerates whole machine assignments as the oracle.
"""
from __future__ import annotations

from math import comb

import numpy as np

from .errors import SizeGuardError
from .model import (
    Instance,
    NormalizedInstance,
    Solution,
    normalize_instance,
    solution_from_normalized,
)
from .single_machine import _ensure_normalized

DEFAULT_C_PM = 8
BRUTE_FORCE_MULTI_MAX = 10**7


def _machine_count(instance, m: int | None) -> int:
    if m is None:
        m = instance.machines
    if m < 1:
        raise ValueError("machine count must be >= 1")
    return m


def anchor_table(instance, m: int | None = None) -> tuple[int, ...]:
    """Scaled anchors m*anchor(j) for every prefix length j = 0..n.

    Computed with one suffix-minimum sweep; the j = n entry has an empty
    minimum and takes the convention m*d_last (only ever an upper bound,
    so the loosest consistent value is safe).
    """
    norm = _ensure_normalized(instance)
    m = _machine_count(norm, m)
    n = norm.n
    pref = [0] * (n + 1)
    for i, job in enumerate(norm.jobs):
        pref[i + 1] = pref[i] + job.p
    out = [0] * (n + 1)
    out[n] = m * norm.d_last
    best = None
    for j in range(n - 1, -1, -1):
        beta = m * norm.jobs[j].d - pref[j + 1]
        best = beta if best is None else min(best, beta)
        out[j] = pref[j] + best
    return tuple(out)


def anchor(instance, j: int, m: int | None = None) -> int:
    """m-scaled anchor for prefix length j (exact integer arithmetic)."""
    norm = _ensure_normalized(instance)
    if not (0 <= j <= norm.n):
        raise ValueError(f"prefix length {j} out of [0, {norm.n}]")
    return anchor_table(norm, m)[j]


def pm_dp_solve(instance, m: int | None = None, c_pm: int = DEFAULT_C_PM) -> Solution:
    """Exact optimum via the windowed load-pattern DP.

    States are canonical (sorted) load tuples; job j+1 either goes last
    onto one machine (completing at that machine's new load, which must
    meet its due date) or is skipped.  The scheduled volume of a state
    is the sum of its loads, so only reachability is tracked, plus
    back-pointers for witness reconstruction.
    """
    norm = _ensure_normalized(instance)
    m = _machine_count(norm, m)
    if norm.machines != m:
        norm = NormalizedInstance(jobs=norm.jobs, machines=m, perm=norm.perm)
    n = norm.n
    alphas = anchor_table(norm, m)
    radius = m * c_pm * norm.p_max**2
    per_machine = min(2 * c_pm * norm.p_max**2 + 2, norm.total_processing + 1)
    if n * comb(per_machine + m - 1, m) > 5 * 10**8:
        raise SizeGuardError(
            f"pattern window for m={m}, p_max={norm.p_max} exceeds the memory budget"
        )
    suffix_volume = [0] * (n + 1)
    for j in range(n - 1, -1, -1):
        suffix_volume[j] = suffix_volume[j + 1] + norm.jobs[j].p

    # Edge logic per layer, on m-scaled loads.  Some optimal trajectory obeys
    # (i) every load <= max(0, anchor) + C*p_max^2 and (ii) pairwise spread
    # <= C*p_max^2.  A state may sink below the anchor without bound, but once
    # all its loads are <= anchor - p_max the remaining jobs fit greedily and
    # the state can be cashed out.  So: drop above `hi`; keep above `lo`;
    # below `lo`, either the whole pattern clears the greedy bar or its
    # spread exceeds (ii) and no optimal trajectory needs it.
    slack = m * norm.p_max

    def window(layer: int) -> tuple[int, int, int]:
        a = alphas[layer]
        return max(0, a - radius - slack), max(0, a) + radius, a - slack

    # greedy capture: (volume, layer, pattern, back-pointer) for states whose
    # loads all sank below the window, where everything remaining fits greedily
    best_greedy: tuple[int, int, tuple[int, ...], tuple | None] | None = None

    start = tuple([0] * m)
    layers: list[dict[tuple[int, ...], tuple[tuple[int, ...], int | None] | None]] = []
    states: dict[tuple[int, ...], tuple[tuple[int, ...], int | None] | None] = {}
    lo, hi, greedy_bar = window(0)
    if lo <= 0 <= hi:
        states[start] = None
    elif 0 <= greedy_bar:
        best_greedy = (suffix_volume[0], 0, start, None)
    layers.append(states)

    for j in range(n):
        job = norm.jobs[j]
        nxt: dict[tuple[int, ...], tuple[tuple[int, ...], int | None]] = {}
        for pat in states:
            if pat not in nxt:
                nxt[pat] = (pat, None)
            tried = set()
            for pos in range(m):
                load = pat[pos]
                if load in tried:
                    continue
                tried.add(load)
                new_load = load + job.p
                if new_load > job.d:
                    continue
                newpat = tuple(sorted(pat[:pos] + (new_load,) + pat[pos + 1 :]))
                if newpat not in nxt:
                    nxt[newpat] = (pat, load)
        lo, hi, greedy_bar = window(j + 1)
        pruned = {}
        for pat, back in nxt.items():
            top, bottom = m * pat[-1], m * pat[0]
            if top > hi:
                continue
            if bottom >= lo:
                pruned[pat] = back
            elif top <= greedy_bar:
                vol = sum(pat) + suffix_volume[j + 1]
                if best_greedy is None or vol > best_greedy[0]:
                    best_greedy = (vol, j + 1, pat, back)
            # else: spread exceeds the balance bound; not on any optimal
            # trajectory the structural lemma retains
        states = pruned
        layers.append(states)

    best_final = None
    if states:
        top_vol = max(sum(pat) for pat in states)
        best_final = min(pat for pat in states if sum(pat) == top_vol)

    use_greedy = best_greedy is not None and (
        best_final is None or best_greedy[0] > sum(best_final)
    )
    if use_greedy:
        _, layer, pat, entry_back = best_greedy
    else:
        if best_final is None:
            raise AssertionError("load-pattern DP lost every state")
        layer, pat, entry_back = n, best_final, layers[n][best_final]

    assignment = _reconstruct(norm, m, layers, layer, pat, entry_back)
    if use_greedy:
        _greedy_complete(norm, m, assignment, layer)
    selected = sorted(assignment)
    return solution_from_normalized(norm, selected, assignment)


def _reconstruct(norm, m, layers, layer, pat, entry_back) -> dict[int, int]:
    """Back-walk the DP layers into a job -> machine map.

    ``entry_back`` is the back-pointer of the endpoint pattern itself
    (greedy-captured patterns are pruned from their layer dict)."""
    steps = []
    cur = pat
    back = entry_back
    for j in range(layer, 0, -1):
        prev, assigned_load = back
        if assigned_load is not None:
            steps.append((j - 1, assigned_load))
        cur = prev
        back = layers[j - 1][cur] if j - 1 > 0 else None
    loads = [0] * m
    assignment: dict[int, int] = {}
    for j, load_before in reversed(steps):
        mach = loads.index(load_before)
        assignment[j] = mach
        loads[mach] += norm.jobs[j].p
    return assignment


def _greedy_complete(norm, m, assignment: dict[int, int], layer: int) -> None:
    """Append every job from `layer` on to the least-loaded machine."""
    loads = [0] * m
    for j, mach in assignment.items():
        loads[mach] += norm.jobs[j].p
    for j in range(layer, norm.n):
        mach = loads.index(min(loads))
        loads[mach] += norm.jobs[j].p
        assert loads[mach] <= norm.jobs[j].d, "greedy completion violated a due date"
        assignment[j] = mach


def brute_force_multi(instance, m: int | None = None) -> Solution:
    """Exact optimum by enumerating all (m+1)^n machine assignments."""
    norm = _ensure_normalized(instance)
    m = _machine_count(norm, m)
    if norm.machines != m:
        norm = NormalizedInstance(jobs=norm.jobs, machines=m, perm=norm.perm)
    n = norm.n
    total_codes = (m + 1) ** n
    if total_codes > BRUTE_FORCE_MULTI_MAX:
        raise SizeGuardError(
            f"(m+1)^n = {total_codes} exceeds the enumeration guard {BRUTE_FORCE_MULTI_MAX}"
        )
    p = np.array([j.p for j in norm.jobs], dtype=np.int64)
    d = np.array([j.d for j in norm.jobs], dtype=np.int64)
    place = (m + 1) ** np.arange(n, dtype=np.int64)
    best_vol, best_code = -1, 0
    chunk = 1 << 16
    for start in range(0, total_codes, chunk):
        codes = np.arange(start, min(start + chunk, total_codes), dtype=np.int64)
        digits = (codes[:, None] // place[None, :]) % (m + 1)
        feasible = np.ones(codes.size, dtype=bool)
        for mach in range(1, m + 1):
            sel = digits == mach
            cum = np.cumsum(sel * p[None, :], axis=1)
            feasible &= (~sel | (cum <= d[None, :])).all(axis=1)
        volumes = np.where(feasible, (digits > 0) @ p, -1)
        i = int(np.argmax(volumes))
        if volumes[i] > best_vol:
            best_vol, best_code = int(volumes[i]), int(codes[i])
    assignment: dict[int, int] = {}
    code = best_code
    for j in range(n):
        code, digit = divmod(code, m + 1)
        if digit > 0:
            assignment[j] = digit - 1
    return solution_from_normalized(norm, sorted(assignment), assignment)
