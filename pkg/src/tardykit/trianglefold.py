"""Subset Sum -> triangle-fold ILP reduction, with witnesses and checking.

A triangle-fold ILP repeats one fixed block matrix A down a lower
triangle: block-row g applies A to every block of variables up to g.
Here A is the fixed 3x5 matrix

        y   p   q   r   w
      ( 1  -2  -2  -2   1 )     value chain
      ( 1  -1  -1  -1   0 )     duplicate chain
      ( 0   0   1  -1   0 )     q/r coupling

and all instance-specific information lives in the right-hand sides
(each 0, 1, or +inf -- +inf cancels a row) and the variable upper
bounds (each 0 or +inf -- 0 cancels a column).

Per Subset Sum element (and once more for the target) the reduction
lays down a "super-block": a chain of paired blocks whose only two
solutions in isolation are all-zeros and powers-of-two
(z = (1, 1, 2, 4, 8, ...)), plus one trailing block exposing a variable
w = sum of the chain.  Within the chain, position s >= 1 unlocks the
q-copy of its value when bit s-1 of the element is one (the r-copy for
the target super-block), so the q-variables of a powers-of-two
super-block sum to exactly its element.  The last super-block is forced
to powers-of-two, and the one uncancelled coupling row at the very
bottom pins sum(q) = sum(r) = target.  Feasibility of the ILP is then
exactly Subset Sum feasibility.

The chain layout per super-block with bit budget J is:

    position s = 0..J:  a y-block (only y unlocked) whose value-chain
                        row is kept, then a z-block (exactly one of
                        p/q/r unlocked) whose duplicate-chain row is
                        kept;
    one final w-block (only w unlocked) keeping both chain rows.

Checking is by direct evaluation; desk-scale feasibility enumerates the
2^n structured witnesses rather than solving ILPs (general triangle-fold
feasibility being NP-hard is the whole point).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import FormatError, SizeGuardError

INF = float("inf")

A_MATRIX = (
    (1, -2, -2, -2, 1),
    (1, -1, -1, -1, 0),
    (0, 0, 1, -1, 0),
)
VARS_PER_BLOCK = 5
ROWS_PER_BLOCK = 3
VAR_ROLES = ("y", "p", "q", "r", "w")

ENUMERATE_MAX_N = 20


@dataclass(frozen=True)
class SubsetSumInstance:
    elements: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(int(a) for a in self.elements))
        if len(self.elements) == 0:
            raise ValueError("need at least one element")
        if any(a < 0 for a in self.elements) or self.target < 0:
            raise ValueError("elements and target must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class BlockInfo:
    """Placement of one block: which super-block, and its role there."""

    super_block: int  # 0..n (n = index of the target super-block)
    position: int  # chain position for y/z blocks, J+1 for the w block
    kind: str  # "y", "z", or "w"


@dataclass(frozen=True)
class TriangleFoldILP:
    """Expanded constraint data plus (non-compared) provenance metadata."""

    n_blocks: int
    relations: tuple[str, ...]  # per expanded row: "<=", "=", ">="
    rhs: tuple[float, ...]  # per expanded row: 0, 1, or INF
    upper_bounds: tuple[float, ...]  # per variable: 0 or INF
    blocks: tuple[BlockInfo, ...] = field(compare=False, default=())
    source: SubsetSumInstance | None = field(compare=False, default=None)
    bit_length: int = field(compare=False, default=0)

    @property
    def num_vars(self) -> int:
        return self.n_blocks * VARS_PER_BLOCK

    @property
    def num_rows(self) -> int:
        return self.n_blocks * ROWS_PER_BLOCK


def _bit_length_budget(ss: SubsetSumInstance) -> int:
    return max(1, max(v.bit_length() for v in (*ss.elements, ss.target)))


def build_trianglefold(ss: SubsetSumInstance) -> TriangleFoldILP:
    """Compile a Subset Sum instance into a triangle-fold ILP.

    Produces n+1 super-blocks of 2(J+1)+1 blocks each, J being the
    common bit budget (max bit length over elements and target, so the
    target is always representable; shorter values pad with zero bits,
    whose value-copies stay cancelled).
    """
    n = ss.n
    j_bits = _bit_length_budget(ss)
    blocks: list[BlockInfo] = []
    relations: list[str] = []
    rhs: list[float] = []
    bounds: list[float] = []
    for sb in range(n + 1):
        coded = ss.target if sb == n else ss.elements[sb]
        for s in range(j_bits + 1):
            # y-block: keeps its value-chain row.
            blocks.append(BlockInfo(sb, s, "y"))
            if s == 0:
                relations.append("=" if sb == n else "<=")
                rhs.append(1)
            else:
                relations.append("=")
                rhs.append(0)
            relations += ["<=", "<="]
            rhs += [INF, INF]
            bounds += [INF, 0, 0, 0, 0]
            # z-block: keeps its duplicate-chain row; one value copy open.
            blocks.append(BlockInfo(sb, s, "z"))
            relations += ["<=", "=", "<="]
            rhs += [INF, 0, INF]
            if s == 0:
                open_role = "p"
            else:
                bit = (coded >> (s - 1)) & 1
                if bit == 0:
                    open_role = "p"
                elif sb == n:
                    open_role = "r"
                else:
                    open_role = "q"
            bounds += [0] + [INF if role == open_role else 0 for role in ("p", "q", "r")] + [0]
        # w-block: keeps both chain rows.
        blocks.append(BlockInfo(sb, j_bits + 1, "w"))
        relations += ["=", "=", "<="]
        rhs += [0, 0, INF]
        bounds += [0, 0, 0, 0, INF]
    # The very last coupling row pins sum(q) - sum(r) = 0.
    relations[-1] = "="
    rhs[-1] = 0
    return TriangleFoldILP(
        n_blocks=len(blocks),
        relations=tuple(relations),
        rhs=tuple(rhs),
        upper_bounds=tuple(bounds),
        blocks=tuple(blocks),
        source=ss,
        bit_length=j_bits,
    )


def _as_ilp(ss_or_ilp) -> TriangleFoldILP:
    if isinstance(ss_or_ilp, TriangleFoldILP):
        return ss_or_ilp
    return build_trianglefold(ss_or_ilp)


def witness_from_subset(ss_or_ilp, subset) -> list[int]:
    """Full variable assignment: powers-of-two for chosen super-blocks
    (always for the target super-block), all-zeros elsewhere."""
    ilp = _as_ilp(ss_or_ilp)
    chosen = set(subset)
    n = ilp.source.n
    if not all(1 <= i <= n for i in chosen):
        raise ValueError("subset members must be 1-based element indices")
    x = [0] * ilp.num_vars
    for g, info in enumerate(ilp.blocks):
        if info.super_block != n and (info.super_block + 1) not in chosen:
            continue
        value = 1 if info.position == 0 else 1 << (info.position - 1)
        base = g * VARS_PER_BLOCK
        if info.kind == "y":
            x[base] = value
        elif info.kind == "z":
            for c in range(1, 4):
                if ilp.upper_bounds[base + c] == INF:
                    x[base + c] = value
        else:  # w = sum of the chain = 2^J
            x[base + 4] = 1 << ilp.bit_length
    return x


@dataclass(frozen=True)
class ConstraintViolation:
    row: int  # expanded row index
    block: int  # block-row g
    block_row: int  # 0, 1, or 2 within the block
    lhs: int
    relation: str
    rhs: float

    def __str__(self):
        return (
            f"row {self.row} (block {self.block}, line {self.block_row}): "
            f"{self.lhs} {self.relation} {self.rhs} violated"
        )


def check_assignment(ilp: TriangleFoldILP, x) -> tuple[bool, ConstraintViolation | None]:
    """Evaluate every constraint exactly; report the first violation.

    The triangular structure makes each block-row a running prefix sum
    of A applied to the blocks so far, so the full check is linear in
    the number of variables.
    """
    x = [int(v) for v in x]
    if len(x) != ilp.num_vars:
        raise ValueError(f"expected {ilp.num_vars} variables, got {len(x)}")
    for v, ub in zip(x, ilp.upper_bounds):
        if v < 0 or v > ub:
            raise ValueError(f"assignment value {v} outside bounds [0, {ub}]")
    acc = [0, 0, 0]
    for g in range(ilp.n_blocks):
        base = g * VARS_PER_BLOCK
        for t in range(ROWS_PER_BLOCK):
            acc[t] += sum(
                A_MATRIX[t][c] * x[base + c] for c in range(VARS_PER_BLOCK)
            )
        for t in range(ROWS_PER_BLOCK):
            row = g * ROWS_PER_BLOCK + t
            rel, bound = ilp.relations[row], ilp.rhs[row]
            if bound == INF and rel == "<=":
                continue
            ok = (
                acc[t] <= bound
                if rel == "<="
                else acc[t] == bound
                if rel == "="
                else acc[t] >= bound
            )
            if not ok:
                return False, ConstraintViolation(row, g, t, acc[t], rel, bound)
    return True, None


def enumerate_feasible(ss: SubsetSumInstance) -> bool:
    """Desk-scale ILP feasibility via the 2^n structured witnesses.

    Also cross-checks, per subset, that the witness satisfies the ILP
    exactly when the subset sums to the target.
    """
    if ss.n > ENUMERATE_MAX_N:
        raise SizeGuardError(f"enumeration limited to n <= {ENUMERATE_MAX_N}")
    ilp = build_trianglefold(ss)
    feasible = False
    for mask in range(1 << ss.n):
        subset = [i + 1 for i in range(ss.n) if (mask >> i) & 1]
        ok, _ = check_assignment(ilp, witness_from_subset(ilp, subset))
        hits = sum(ss.elements[i - 1] for i in subset) == ss.target
        if ok != hits:
            raise AssertionError(
                f"witness check ({ok}) disagrees with subset-sum ({hits}) for {subset}"
            )
        feasible = feasible or ok
    return feasible


def enumerate_superblock_solutions(
    ilp: TriangleFoldILP, super_block: int, value_cap: int
) -> list[tuple[int, ...]]:
    """All assignments of one super-block satisfying its own kept rows in
    isolation, each free variable ranging over 0..value_cap.

    Earlier super-blocks contribute zero to every prefix sum in both
    valid global solutions, so isolation matches the global behaviour.
    Returns tuples of the free-variable values in block order.
    """
    local = [g for g, info in enumerate(ilp.blocks) if info.super_block == super_block]
    free_cols = []
    for g in local:
        base = g * VARS_PER_BLOCK
        open_vars = [c for c in range(VARS_PER_BLOCK) if ilp.upper_bounds[base + c] == INF]
        assert len(open_vars) == 1
        free_cols.append(open_vars[0])
    solutions: list[tuple[int, ...]] = []

    def recurse(idx: int, acc1: int, acc2: int, chosen: tuple[int, ...]):
        if idx == len(local):
            solutions.append(chosen)
            return
        g = local[idx]
        col = free_cols[idx]
        for value in range(value_cap + 1):
            n1 = acc1 + A_MATRIX[0][col] * value
            n2 = acc2 + A_MATRIX[1][col] * value
            ok = True
            for t, total in ((0, n1), (1, n2)):
                row = g * ROWS_PER_BLOCK + t
                rel, bound = ilp.relations[row], ilp.rhs[row]
                if bound == INF and rel == "<=":
                    continue
                if rel == "<=" and not total <= bound:
                    ok = False
                elif rel == "=" and not total == bound:
                    ok = False
            if ok:
                recurse(idx + 1, n1, n2, chosen + (value,))

    recurse(0, 0, 0, ())
    return solutions


def powers_of_two_profile(ilp: TriangleFoldILP) -> tuple[int, ...]:
    """Free-variable values of the powers-of-two super-block solution."""
    values = []
    for s in range(ilp.bit_length + 1):
        v = 1 if s == 0 else 1 << (s - 1)
        values += [v, v]
    values.append(1 << ilp.bit_length)
    return tuple(values)


# ---------------------------------------------------------------------------
# Export / parse


def _fmt(value) -> str:
    return "inf" if value == INF else str(int(value))


def _parse_value(tok: str) -> float:
    if tok == "inf":
        return INF
    return int(tok)


def export_ilp(ilp: TriangleFoldILP, fmt: str = "rows") -> str:
    """Serialize the expanded system.

    ``rows``: one constraint per line (dense coefficients, relation,
    rhs), then one bound per line; round-trips through `parse_ilp`.
    ``leq``: same shape but in pure <= normal form, equalities expanded
    into opposing inequality pairs.
    ``json``: compact block-structure document; also round-trips.
    """
    if fmt == "json":
        doc = {
            "version": 1,
            "a_matrix": [list(r) for r in A_MATRIX],
            "n_blocks": ilp.n_blocks,
            "rows": [
                {"rel": rel, "rhs": None if val == INF else int(val)}
                for rel, val in zip(ilp.relations, ilp.rhs)
            ],
            "upper_bounds": [None if b == INF else int(b) for b in ilp.upper_bounds],
        }
        return json.dumps(doc, indent=1)
    if fmt not in ("rows", "leq"):
        raise FormatError(f"unknown export format {fmt!r}")
    lines = [f"trianglefold v1 blocks={ilp.n_blocks} vars={ilp.num_vars}"]
    for row in range(ilp.num_rows):
        g, t = divmod(row, ROWS_PER_BLOCK)
        coeffs = [0] * ilp.num_vars
        for gg in range(g + 1):
            for c in range(VARS_PER_BLOCK):
                coeffs[gg * VARS_PER_BLOCK + c] = A_MATRIX[t][c]
        rel, val = ilp.relations[row], ilp.rhs[row]
        if fmt == "rows":
            lines.append(f"{' '.join(map(str, coeffs))} {rel} {_fmt(val)}")
        else:
            if rel in ("<=", "="):
                lines.append(f"{' '.join(map(str, coeffs))} <= {_fmt(val)}")
            if rel in (">=", "="):
                neg = [-c for c in coeffs]
                negval = -val if val != INF else INF
                lines.append(f"{' '.join(map(str, neg))} <= {_fmt(negval)}")
    lines.append("bounds")
    for b in ilp.upper_bounds:
        lines.append(_fmt(b))
    return "\n".join(lines) + "\n"


def parse_ilp(text: str) -> TriangleFoldILP:
    """Parse the ``rows`` text format back into an ILP (structural fields
    only); verifies the coefficient pattern is the triangle of A."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) < 3 or head[0] != "trianglefold":
        raise FormatError("missing trianglefold header")
    n_blocks = int(head[2].split("=")[1])
    num_vars = n_blocks * VARS_PER_BLOCK
    num_rows = n_blocks * ROWS_PER_BLOCK
    if len(lines) != 1 + num_rows + 1 + num_vars:
        raise FormatError("unexpected line count")
    relations, rhs = [], []
    for row in range(num_rows):
        toks = lines[1 + row].split()
        if len(toks) != num_vars + 2:
            raise FormatError(f"row {row}: expected {num_vars} coefficients")
        coeffs = [int(tok) for tok in toks[:num_vars]]
        g, t = divmod(row, ROWS_PER_BLOCK)
        for gg in range(n_blocks):
            for c in range(VARS_PER_BLOCK):
                expected = A_MATRIX[t][c] if gg <= g else 0
                if coeffs[gg * VARS_PER_BLOCK + c] != expected:
                    raise FormatError(f"row {row}: not a triangle of the fixed A")
        relations.append(toks[-2])
        rhs.append(_parse_value(toks[-1]))
    if lines[1 + num_rows] != "bounds":
        raise FormatError("missing bounds section")
    bounds = [_parse_value(ln.strip()) for ln in lines[2 + num_rows :]]
    return TriangleFoldILP(
        n_blocks=n_blocks,
        relations=tuple(relations),
        rhs=tuple(rhs),
        upper_bounds=tuple(bounds),
    )


def parse_ilp_json(text: str) -> TriangleFoldILP:
    doc = json.loads(text)
    if doc.get("version") != 1 or [tuple(r) for r in doc["a_matrix"]] != list(A_MATRIX):
        raise FormatError("unsupported trianglefold JSON document")
    return TriangleFoldILP(
        n_blocks=doc["n_blocks"],
        relations=tuple(r["rel"] for r in doc["rows"]),
        rhs=tuple(INF if r["rhs"] is None else r["rhs"] for r in doc["rows"]),
        upper_bounds=tuple(INF if b is None else b for b in doc["upper_bounds"]),
    )
