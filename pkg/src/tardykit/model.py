"""Canonical data model for tardy-job scheduling instances.

An instance is a list of jobs, each with a positive integer processing
time ``p`` and a nonnegative integer due date ``d``, plus a machine count
``m`` (default 1).  A solution selects a subset of jobs that can all be
completed by their due dates when run earliest-due-date-first (per
machine, for m > 1); every unselected job is tardy and pays its full
processing time.  The objective is therefore ``P - p(S)`` where ``P`` is
the total processing time and ``p(S)`` the volume of the selected set.

All solvers operate on a normalized instance: jobs stably sorted by due
date, with due dates clipped to ``P`` (a due date beyond the total volume
is equivalent to ``P``).  Normalization returns a permutation record so
solutions can be mapped back to the caller's original job order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyInstanceError, InfeasibleSelectionError


@dataclass(frozen=True)
class Job:
    p: int  # processing time, >= 1
    d: int  # due date, >= 0

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool) or self.p < 1:
            raise ValueError(f"processing time must be a positive integer, got {self.p!r}")
        if not isinstance(self.d, int) or isinstance(self.d, bool) or self.d < 0:
            raise ValueError(f"due date must be a nonnegative integer, got {self.d!r}")


@dataclass(frozen=True)
class Instance:
    jobs: tuple[Job, ...]
    machines: int = 1

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))
        if self.machines < 1:
            raise ValueError("machine count must be >= 1")

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def total_processing(self) -> int:
        return sum(j.p for j in self.jobs)


@dataclass(frozen=True)
class NormalizedInstance:
    """Jobs sorted nondecreasingly by due date, due dates clipped to P.

    ``perm[i]`` is the position in the original instance of the job now at
    sorted position ``i``.  Ties in due dates keep the original order.
    """

    jobs: tuple[Job, ...]
    machines: int
    perm: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.jobs)

    @property
    def total_processing(self) -> int:
        return sum(j.p for j in self.jobs)

    @property
    def p_max(self) -> int:
        return max(j.p for j in self.jobs)

    @property
    def d_last(self) -> int:
        return self.jobs[-1].d


@dataclass(frozen=True)
class Solution:
    """A selected job subset with its objective value.

    ``selected`` holds 0-based indices into the *original* instance order.
    ``assignment`` is a tuple parallel to ``selected`` giving a 0-based
    machine per selected job; it is present exactly when machines > 1.
    """

    objective: int
    selected: tuple[int, ...]
    assignment: tuple[int, ...] | None = None


def _radix_sort_by_due(jobs: tuple[Job, ...]) -> list[int]:
    """Stable LSD radix sort of job positions keyed on due date, base n."""
    n = len(jobs)
    base = max(2, n)
    order = list(range(n))
    keys = [j.d for j in jobs]
    max_key = max(keys)
    shift = 1
    while True:
        buckets: list[list[int]] = [[] for _ in range(base)]
        for i in order:
            buckets[(keys[i] // shift) % base].append(i)
        order = [i for bucket in buckets for i in bucket]
        shift *= base
        if shift > max_key:
            break
    return order


def normalize_instance(instance: Instance) -> NormalizedInstance:
    """Sort jobs stably by due date and clip due dates to P.

    Raises ``EmptyInstanceError`` for an empty job list; solvers treat the
    empty instance as a distinct signal (the CLI reports objective 0).
    """
    if instance.n == 0:
        raise EmptyInstanceError("instance has no jobs")
    total = instance.total_processing
    clipped = tuple(Job(j.p, min(j.d, total)) for j in instance.jobs)
    order = _radix_sort_by_due(clipped)
    return NormalizedInstance(
        jobs=tuple(clipped[i] for i in order),
        machines=instance.machines,
        perm=tuple(order),
    )


def edf_feasible(
    instance: NormalizedInstance,
    selected,
    machine_assignment: dict[int, int] | None = None,
) -> bool:
    """Check earliest-due-date-first feasibility of a selected index set.

    ``selected`` contains 0-based indices into the normalized job order.
    For a single machine the selected jobs are run back-to-back in index
    order and each must complete by its due date.  For m > 1 machines,
    ``machine_assignment`` maps each selected index to its machine and the
    same prefix check applies per machine.
    """
    if instance.machines > 1:
        if machine_assignment is None:
            raise ValueError("machine_assignment required when machines > 1")
        loads = [0] * instance.machines
        for i in sorted(selected):
            mach = machine_assignment[i]
            loads[mach] += instance.jobs[i].p
            if loads[mach] > instance.jobs[i].d:
                return False
        return True
    t = 0
    for i in sorted(selected):
        t += instance.jobs[i].p
        if t > instance.jobs[i].d:
            return False
    return True


def objective_of(instance: NormalizedInstance, selected,
                 machine_assignment: dict[int, int] | None = None) -> int:
    """Total processing time of the tardy (unselected) jobs: P - p(S)."""
    if not edf_feasible(instance, selected, machine_assignment):
        raise InfeasibleSelectionError(f"selection {sorted(selected)} is not EDF-feasible")
    return instance.total_processing - sum(instance.jobs[i].p for i in selected)


def solution_from_normalized(
    instance: NormalizedInstance,
    selected_norm,
    assignment_norm: dict[int, int] | None = None,
) -> Solution:
    """Map a normalized-index selection back to original job positions."""
    sel_norm = sorted(selected_norm)
    objective = objective_of(instance, sel_norm, assignment_norm)
    pairs = sorted(
        (instance.perm[i], None if assignment_norm is None else assignment_norm[i])
        for i in sel_norm
    )
    selected = tuple(orig for orig, _ in pairs)
    if instance.machines > 1:
        assignment = tuple(mach for _, mach in pairs)
    else:
        assignment = None
    return Solution(objective=objective, selected=selected, assignment=assignment)


def verify_solution(instance: Instance, solution: Solution) -> bool:
    """Re-check a solution against the raw instance it was produced for."""
    norm = normalize_instance(instance)
    inv = {orig: pos for pos, orig in enumerate(norm.perm)}
    sel_norm = [inv[i] for i in solution.selected]
    if instance.machines > 1:
        if solution.assignment is None or len(solution.assignment) != len(solution.selected):
            return False
        assign_norm = {inv[i]: m for i, m in zip(solution.selected, solution.assignment)}
    else:
        assign_norm = None
    if not edf_feasible(norm, sel_norm, assign_norm):
        return False
    return solution.objective == objective_of(norm, sel_norm, assign_norm)
