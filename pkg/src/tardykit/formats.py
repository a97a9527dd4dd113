"""JSON file formats shared by the CLI and tests.

Instance files:  {"version": 1, "machines": m, "jobs": [{"p": int, "d": int}, ...]}
Solution files:  {"objective": int, "selected": [1-based indices],
                  "assignment": [1-based machine per selected job] | null}
Convolution in:  {"a": [...], "b": [...], "d": [...]}
                 or {"a": [...], "b": [...], "skew": "identity"}  (d[k] = k)
Convolution out: {"c": [...]}

Indices in files are 1-based positions in file order; the library uses
0-based positions internally.
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import FormatError
from .model import Instance, Job, Solution
from .skewconv import SkewedConvInput, identity_skew_input


def _require(cond: bool, message: str):
    if not cond:
        raise FormatError(message)


def instance_to_dict(instance: Instance) -> dict:
    return {
        "version": 1,
        "machines": instance.machines,
        "jobs": [{"p": j.p, "d": j.d} for j in instance.jobs],
    }


def instance_from_dict(doc) -> Instance:
    _require(isinstance(doc, dict), "instance document must be an object")
    _require(doc.get("version") == 1, "unsupported instance version")
    machines = doc.get("machines", 1)
    _require(isinstance(machines, int) and machines >= 1, "bad machine count")
    jobs_raw = doc.get("jobs")
    _require(isinstance(jobs_raw, list), "missing jobs array")
    jobs = []
    for entry in jobs_raw:
        _require(
            isinstance(entry, dict) and isinstance(entry.get("p"), int)
            and isinstance(entry.get("d"), int),
            f"bad job entry {entry!r}",
        )
        try:
            jobs.append(Job(entry["p"], entry["d"]))
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    return Instance(jobs=tuple(jobs), machines=machines)


def solution_to_dict(solution: Solution) -> dict:
    return {
        "objective": solution.objective,
        "selected": [i + 1 for i in solution.selected],
        "assignment": (
            None
            if solution.assignment is None
            else [m + 1 for m in solution.assignment]
        ),
    }


def conv_input_from_dict(doc) -> SkewedConvInput:
    _require(isinstance(doc, dict), "convolution document must be an object")
    for key in ("a", "b"):
        _require(
            isinstance(doc.get(key), list) and doc[key]
            and all(isinstance(v, int) for v in doc[key]),
            f"bad vector {key!r}",
        )
    a, b = doc["a"], doc["b"]
    _require(len(a) == len(b), "a and b must have equal length")
    if doc.get("skew") == "identity":
        return identity_skew_input(a, b)
    d = doc.get("d")
    _require(
        isinstance(d, list) and all(isinstance(v, int) for v in d),
        "missing skew vector d (or skew: identity)",
    )
    try:
        return SkewedConvInput(np.array(a), np.array(b), np.array(d))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def conv_output_to_dict(c) -> dict:
    return {"c": [int(v) for v in c]}


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def dump_json(doc, path: str | None) -> str:
    text = json.dumps(doc, indent=1) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def digest(doc) -> str:
    """Stable content digest of a JSON-serializable document."""
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
