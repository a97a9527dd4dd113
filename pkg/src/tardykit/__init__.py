"""Exact tardy-job scheduling solvers, max-min skewed convolution, and
triangle-fold ILP generation, each paired with an independent oracle."""

from .model import (
    Instance,
    Job,
    NormalizedInstance,
    Solution,
    edf_feasible,
    normalize_instance,
    objective_of,
    verify_solution,
)
from .exactconv import binary_convolution, pair_existence
from .skewconv import (
    GridStructure,
    PerturbedInput,
    SkewedConvInput,
    maxmin_convolution,
    naive_skewed_convolution,
    perturb,
    precompute_grid,
    query_ck_gt_v,
    skewed_maxmin_convolution,
)
from .single_machine import (
    add_dummy_jobs,
    brute_force_single,
    compute_latest_starts,
    decide_no_idle,
    lawler_moore,
    pmax_cubed_solve,
    prefix_busy_table,
    select_split_index,
    suffix_busy_table,
)
from .multi_machine import anchor, brute_force_multi, pm_dp_solve
from .trianglefold import (
    SubsetSumInstance,
    TriangleFoldILP,
    build_trianglefold,
    check_assignment,
    enumerate_feasible,
    export_ilp,
    parse_ilp,
    witness_from_subset,
)

__version__ = "0.1.0"
