"""Command-line front end.

Subcommands: ``gen`` (instance generation), ``solve`` (scheduling
solvers), ``conv`` (skewed convolution), ``ilp`` (triangle-fold
generation), ``bench`` (scaling harness).

Exit codes: 0 ok, 1 usage, 2 io/parse, 3 size/resource guard,
4 self-test mismatch.

``solve``, ``conv``, and ``ilp`` append one JSON-line run report to
``runs.jsonl`` in the directory named by $TARDYKIT_OUT (default: the
working directory).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import bench as bench_mod
from . import formats, gen
from .errors import (
    EmptyInstanceError,
    FormatError,
    MagnitudeError,
    SizeGuardError,
    TardykitError,
)
from .model import Solution
from .multi_machine import brute_force_multi, pm_dp_solve
from .single_machine import (
    BRUTE_FORCE_MAX_N,
    DEFAULT_C_WIN,
    brute_force_single,
    lawler_moore,
    pmax_cubed_solve,
)
from .skewconv import naive_skewed_convolution, skewed_maxmin_convolution
from .trianglefold import (
    SubsetSumInstance,
    build_trianglefold,
    enumerate_feasible,
    export_ilp,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_GUARD = 3
EXIT_MISMATCH = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tardykit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    p_gen.add_argument(
        "kind",
        choices=["uniform-jobs", "tight-deadlines", "conv-random", "conv-figure1"],
    )
    p_gen.add_argument("--n", type=int, default=16)
    p_gen.add_argument("--pmax", type=int, default=8)
    p_gen.add_argument("--bound", type=int, default=1000)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--machines", type=int, default=1)
    p_gen.add_argument("--skew", choices=["random", "zero", "identity"], default="random")
    p_gen.add_argument("--out", help="output file (default: stdout)")

    p_solve = sub.add_parser("solve", help="run a scheduling solver")
    p_solve.add_argument(
        "--algo",
        required=True,
        choices=["lawler-moore", "pmax3", "brute", "pm-dp"],
    )
    p_solve.add_argument("--input", required=True)
    p_solve.add_argument("--machines", type=int, help="override the file's machine count")
    p_solve.add_argument("--cwin", type=int, default=DEFAULT_C_WIN)
    p_solve.add_argument("--cpm", type=int, default=DEFAULT_C_WIN)
    p_solve.add_argument("--selftest", action="store_true",
                         help="cross-check against the baseline oracle")
    p_solve.add_argument("--out", help="result file (default: stdout)")

    p_conv = sub.add_parser("conv", help="run a convolution")
    p_conv.add_argument("--algo", required=True, choices=["fast", "naive"])
    p_conv.add_argument("--input", required=True)
    p_conv.add_argument("--p", type=int, help="grid parameter override")
    p_conv.add_argument("--selftest", action="store_true")
    p_conv.add_argument("--out")

    p_ilp = sub.add_parser("ilp", help="triangle-fold ILP tools")
    ilp_sub = p_ilp.add_subparsers(dest="ilp_command", required=True, parser_class=_Parser)
    p_from = ilp_sub.add_parser("from-subset-sum")
    p_from.add_argument("--elements", required=True, help="comma-separated values")
    p_from.add_argument("--target", type=int, required=True)
    p_from.add_argument("--export", help="write the expanded system to this file")
    p_from.add_argument("--format", choices=["rows", "leq", "json"], default="rows")
    p_from.add_argument("--check", action="store_true",
                        help="enumerate witnesses and report feasibility")
    p_from.add_argument("--out")

    p_bench = sub.add_parser("bench", help="timing sweep with log-log slope")
    p_bench.add_argument("--suite", required=True, choices=["conv", "sched"])
    p_bench.add_argument("--sizes", help="comma-separated sizes")
    p_bench.add_argument("--reps", type=int, default=3)
    p_bench.add_argument("--seed", type=int, default=1)
    p_bench.add_argument("--pmax", type=int, default=32)
    p_bench.add_argument("--out", help="CSV file (default: stdout)")
    return parser


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_report(record: dict):
    outdir = os.environ.get("TARDYKIT_OUT", ".")
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "runs.jsonl"), "a") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")


def _cmd_gen(args) -> int:
    if args.kind == "uniform-jobs":
        doc = formats.instance_to_dict(
            gen.uniform_jobs(args.n, args.pmax, args.seed, args.machines)
        )
    elif args.kind == "tight-deadlines":
        doc = formats.instance_to_dict(
            gen.tight_deadlines(args.n, args.pmax, args.seed, args.machines)
        )
    elif args.kind == "conv-random":
        inp = gen.conv_random(args.n, args.bound, args.seed, args.skew)
        doc = {"a": inp.a.tolist(), "b": inp.b.tolist(), "d": inp.d.tolist()}
    else:
        inp = gen.conv_figure1()
        doc = {"a": inp.a.tolist(), "b": inp.b.tolist(), "d": inp.d.tolist()}
    _emit(formats.dump_json(doc, None), args.out)
    return EXIT_OK


_SCHED_ALGOS = {
    "lawler-moore": lambda inst, args: lawler_moore(inst),
    "pmax3": lambda inst, args: pmax_cubed_solve(inst, c_win=args.cwin),
    "brute": lambda inst, args: brute_force_single(inst),
}


def _solve_oracle(algo: str, inst, machines: int, args) -> Solution:
    if algo == "pm-dp":
        if machines == 1:
            return lawler_moore(inst)
        return brute_force_multi(inst, machines)
    if algo == "lawler-moore":
        if inst.n <= BRUTE_FORCE_MAX_N:
            return brute_force_single(inst)
        return pmax_cubed_solve(inst)
    return lawler_moore(inst)


def _cmd_solve(args) -> int:
    doc = formats.load_json(args.input)
    instance = formats.instance_from_dict(doc)
    machines = args.machines if args.machines is not None else instance.machines
    start = time.perf_counter()
    verdict = None
    try:
        if instance.n == 0:
            solution = Solution(objective=0, selected=(), assignment=None)
        elif args.algo == "pm-dp":
            solution = pm_dp_solve(instance, m=machines, c_pm=args.cpm)
        else:
            if machines != 1:
                raise _UsageError(f"--algo {args.algo} is single-machine only")
            solution = _SCHED_ALGOS[args.algo](instance, args)
        if args.selftest and instance.n > 0:
            oracle = _solve_oracle(args.algo, instance, machines, args)
            verdict = "ok" if oracle.objective == solution.objective else "mismatch"
    except EmptyInstanceError:
        solution = Solution(objective=0, selected=(), assignment=None)
    wall_ms = (time.perf_counter() - start) * 1000.0
    result = formats.solution_to_dict(solution)
    _write_report(
        {
            "cmd": "solve",
            "algo": args.algo,
            "instance_digest": formats.digest(doc),
            "output_digest": formats.digest(result),
            "objective": solution.objective,
            "wall_ms": round(wall_ms, 3),
            "selftest": verdict,
            "seed": None,
            "params": {"machines": machines, "cwin": args.cwin, "cpm": args.cpm},
        }
    )
    _emit(formats.dump_json(result, None), args.out)
    if verdict == "mismatch":
        sys.stderr.write("selftest mismatch: solver disagrees with oracle\n")
        return EXIT_MISMATCH
    return EXIT_OK


def _cmd_conv(args) -> int:
    doc = formats.load_json(args.input)
    inp = formats.conv_input_from_dict(doc)
    start = time.perf_counter()
    if args.algo == "fast":
        c = skewed_maxmin_convolution(inp, p=args.p)
    else:
        c = naive_skewed_convolution(inp)
    verdict = None
    if args.selftest:
        oracle = (
            naive_skewed_convolution(inp)
            if args.algo == "fast"
            else skewed_maxmin_convolution(inp, p=args.p)
        )
        verdict = "ok" if np.array_equal(c, oracle) else "mismatch"
    wall_ms = (time.perf_counter() - start) * 1000.0
    result = formats.conv_output_to_dict(c)
    _write_report(
        {
            "cmd": "conv",
            "algo": args.algo,
            "instance_digest": formats.digest(doc),
            "output_digest": formats.digest(result),
            "objective": None,
            "wall_ms": round(wall_ms, 3),
            "selftest": verdict,
            "seed": None,
            "params": {"p": args.p},
        }
    )
    _emit(formats.dump_json(result, None), args.out)
    if verdict == "mismatch":
        sys.stderr.write("selftest mismatch: fast path disagrees with oracle\n")
        return EXIT_MISMATCH
    return EXIT_OK


def _cmd_ilp(args) -> int:
    try:
        elements = [int(tok) for tok in args.elements.split(",") if tok.strip()]
    except ValueError as exc:
        raise FormatError(f"bad --elements list: {exc}") from exc
    try:
        ss = SubsetSumInstance(tuple(elements), args.target)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    start = time.perf_counter()
    ilp = build_trianglefold(ss)
    feasible = enumerate_feasible(ss) if args.check else None
    wall_ms = (time.perf_counter() - start) * 1000.0
    if args.export:
        with open(args.export, "w") as fh:
            fh.write(export_ilp(ilp, args.format))
    result = {
        "elements": list(ss.elements),
        "target": ss.target,
        "n_blocks": ilp.n_blocks,
        "num_vars": ilp.num_vars,
        "num_rows": ilp.num_rows,
        "bit_length": ilp.bit_length,
        "feasible": feasible,
    }
    _write_report(
        {
            "cmd": "ilp",
            "algo": "from-subset-sum",
            "instance_digest": formats.digest({"elements": list(ss.elements), "target": ss.target}),
            "output_digest": formats.digest(result),
            "objective": None,
            "wall_ms": round(wall_ms, 3),
            "selftest": None,
            "seed": None,
            "params": {"format": args.format, "check": args.check},
        }
    )
    _emit(formats.dump_json(result, None), args.out)
    return EXIT_OK


def _cmd_bench(args) -> int:
    sizes = None
    if args.sizes:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    report = bench_mod.run_bench(
        args.suite, sizes=sizes, reps=args.reps, seed=args.seed, p_max=args.pmax
    )
    _emit(report.to_csv(), args.out)
    sys.stderr.write(f"fitted log-log slope: {report.slope:.4f}\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "conv":
            return _cmd_conv(args)
        if args.command == "ilp":
            return _cmd_ilp(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return EXIT_USAGE
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except FormatError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_IO
    except (SizeGuardError, MagnitudeError) as exc:
        sys.stderr.write(f"guard: {exc}\n")
        return EXIT_GUARD
    except TardykitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
