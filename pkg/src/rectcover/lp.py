"""Exact rational linear programming for rectangle coverings.

The solver is a dense two-phase tableau simplex over ``Fraction`` with
Bland's rule.  On top of it sit the set-cover relaxation of rectangle
covering (weighted: cost |R|+|C|; unweighted: cost 1), its dual weights,
fractional rank, and dual certificates with their checkers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .boolmat import BooleanMatrix, FormatError, bits, triangular_or2
from .covers import (
    BudgetExceeded,
    FractionalCovering,
    Rectangle,
    enumerate_maximal_rectangles,
    iter_rectangles,
    rectangle_cost,
)

MAX_RECTS = 20000
MAX_CHECK_SIDE = 16


class LpError(RuntimeError):
    pass


class InfeasibleError(LpError):
    pass


class UnboundedError(LpError):
    pass


@dataclass
class LinearProgram:
    """``sense`` c.x subject to rows ``A[r] . x (senses[r]) b[r]`` and ``lo <= x <= hi``.

    ``hi`` may be None (no upper bound); lower bounds must be finite.
    """

    c: list[Fraction]
    A: list[list[Fraction]]
    senses: list[str]
    b: list[Fraction]
    bounds: list[tuple[Fraction, Fraction | None]]
    sense: str = "min"

    def __post_init__(self):
        nv = len(self.c)
        self.c = [Fraction(v) for v in self.c]
        self.b = [Fraction(v) for v in self.b]
        self.A = [[Fraction(v) for v in row] for row in self.A]
        self.bounds = [(Fraction(lo), None if hi is None else Fraction(hi)) for lo, hi in self.bounds]
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        if len(self.bounds) != nv:
            raise ValueError("one (lo, hi) bound pair per variable required")
        if not (len(self.A) == len(self.senses) == len(self.b)):
            raise ValueError("A, senses and b must have one entry per constraint")
        for r, row in enumerate(self.A):
            if len(row) != nv:
                raise ValueError(f"constraint {r} has {len(row)} coefficients, expected {nv}")
        for s in self.senses:
            if s not in (">=", "<=", "=="):
                raise ValueError(f"constraint sense {s!r} not understood")
        for j, (lo, hi) in enumerate(self.bounds):
            if hi is not None and hi < lo:
                raise ValueError(f"variable {j}: upper bound {hi} below lower bound {lo}")

    @property
    def num_vars(self) -> int:
        return len(self.c)

    @property
    def num_rows(self) -> int:
        return len(self.A)


@dataclass
class LpSolution:
    objective: Fraction
    x: list[Fraction]
    duals: list[Fraction]
    bound_duals: list[Fraction]
    dual_objective: Fraction
    pivots: int


def _pivot(T: list[list[Fraction]], obj: list[Fraction], r: int, j: int) -> None:
    prow = T[r]
    inv = 1 / prow[j]
    nz = [k for k, v in enumerate(prow) if v]
    for k in nz:
        prow[k] *= inv
    for row in T:
        if row is prow:
            continue
        f = row[j]
        if f:
            for k in nz:
                row[k] -= f * prow[k]
    f = obj[j]
    if f:
        for k in nz:
            obj[k] -= f * prow[k]


def _reduced_costs(T, basis, cost, ncols):
    # obj[k] = cost[k] - sum_r cost[basis[r]] * T[r][k]; last entry = -objective
    obj = list(cost) + [Fraction(0)]
    for r, bv in enumerate(basis):
        cb = cost[bv]
        if cb:
            row = T[r]
            for k in range(ncols + 1):
                if row[k]:
                    obj[k] -= cb * row[k]
    return obj


def _run_simplex(T, basis, obj, allowed, ncols) -> int:
    """Bland's rule on tableau T (rhs in the last column); returns pivot count."""
    pivots = 0
    while True:
        enter = next((k for k in range(ncols) if allowed[k] and obj[k] < 0), None)
        if enter is None:
            return pivots
        best = None
        for r, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            raise UnboundedError("objective is unbounded")
        r = best[1]
        _pivot(T, obj, r, enter)
        basis[r] = enter
        pivots += 1


def solve_lp(p: LinearProgram) -> LpSolution:
    """Optimal basic solution with exact duals; primal and dual objectives are asserted equal."""
    nv = p.num_vars
    sign = 1 if p.sense == "min" else -1
    cost = [sign * c for c in p.c]
    lo = [b[0] for b in p.bounds]
    shift = sum((c * l for c, l in zip(cost, lo)), Fraction(0))

    rows: list[tuple[list[Fraction], str, Fraction]] = []
    for r in range(p.num_rows):
        a = p.A[r]
        rhs = p.b[r] - sum((a[j] * lo[j] for j in range(nv) if a[j] and lo[j]), Fraction(0))
        rows.append((a, p.senses[r], rhs))
    ub_vars = [j for j, (l, h) in enumerate(p.bounds) if h is not None]
    for j in ub_vars:
        a = [Fraction(0)] * nv
        a[j] = Fraction(1)
        rows.append((a, "<=", p.bounds[j][1] - lo[j]))

    m = len(rows)
    flip = []
    extra = []  # (row, coefficient, is_artificial)
    init_col = [0] * m
    for r, (a, s, rhs) in enumerate(rows):
        f = -1 if rhs < 0 else 1
        if f < 0:
            s = {">=": "<=", "<=": ">=", "==": "=="}[s]
        flip.append(f)
        if s == "<=":
            extra.append((r, 1, False))
            init_col[r] = nv + len(extra) - 1
        elif s == ">=":
            extra.append((r, -1, False))
            extra.append((r, 1, True))
            init_col[r] = nv + len(extra) - 1
        else:
            extra.append((r, 1, True))
            init_col[r] = nv + len(extra) - 1
    ncols = nv + len(extra)
    artificial = [False] * ncols
    T = []
    for r, (a, s, rhs) in enumerate(rows):
        f = flip[r]
        row = [f * v for v in a] + [Fraction(0)] * len(extra) + [f * rhs]
        T.append(row)
    for k, (r, coef, art) in enumerate(extra):
        T[r][nv + k] = Fraction(coef)
        artificial[nv + k] = art
    basis = list(init_col)

    pivots = 0
    if any(artificial):
        c1 = [Fraction(1) if artificial[k] else Fraction(0) for k in range(ncols)]
        obj = _reduced_costs(T, basis, c1, ncols)
        pivots += _run_simplex(T, basis, obj, [True] * ncols, ncols)
        if obj[-1] != 0:
            raise InfeasibleError(f"infeasible: phase-one optimum {-obj[-1]}")
        for r in range(m):
            if artificial[basis[r]]:
                k = next((k for k in range(ncols) if not artificial[k] and T[r][k]), None)
                if k is not None:
                    _pivot(T, obj, r, k)
                    basis[r] = k
                    pivots += 1
                # else: redundant row; its artificial stays basic at level 0

    c2 = cost + [Fraction(0)] * len(extra)
    obj = _reduced_costs(T, basis, c2, ncols)
    allowed = [not a for a in artificial]
    pivots += _run_simplex(T, basis, obj, allowed, ncols)

    xs = [Fraction(0)] * ncols
    for r, bv in enumerate(basis):
        xs[bv] = T[r][-1]
    x = [xs[j] + lo[j] for j in range(nv)]
    objective = sign * (-obj[-1] + shift)

    y = [flip[r] * -obj[init_col[r]] for r in range(m)]
    if any(obj[k] < 0 for k in range(ncols) if allowed[k]):
        raise LpError("internal error: final basis is not dual feasible")
    dual_obj = sum((y[r] * rows[r][2] for r in range(m)), Fraction(0)) + shift
    primal_check = sum((c * v for c, v in zip(cost, x)), Fraction(0))
    if dual_obj != primal_check or sign * primal_check != objective:
        raise LpError(f"internal error: primal {primal_check} != dual {dual_obj}")
    duals = [sign * v for v in y[: p.num_rows]]
    bound_duals = [Fraction(0)] * nv
    for t, j in enumerate(ub_vars):
        bound_duals[j] = sign * y[p.num_rows + t]
    return LpSolution(objective, x, duals, bound_duals, sign * dual_obj, pivots)


# -- set-cover relaxation for rectangle coverings -----------------------------


@dataclass
class CoverLP:
    """A cover LP together with its column (rectangle) and row (1-entry) labels."""

    program: LinearProgram
    rectangles: list[Rectangle]
    entries: list[tuple[int, int]]
    weighted: bool


def _cover_program(A: BooleanMatrix, rects: Sequence[Rectangle], weighted: bool, upper_bounds: bool):
    entries = list(A.ones())
    index = {e: k for k, e in enumerate(entries)}
    rowsA = [[Fraction(0)] * len(rects) for _ in entries]
    for s, r in enumerate(rects):
        for cell in r.cells():
            rowsA[index[cell]][s] = Fraction(1)
    cost = [Fraction(rectangle_cost(r) if weighted else 1) for r in rects]
    bounds = [(Fraction(0), Fraction(1) if upper_bounds else None)] * len(rects)
    prog = LinearProgram(cost, rowsA, [">="] * len(entries), [Fraction(1)] * len(entries), bounds)
    return CoverLP(prog, list(rects), entries, weighted)


def build_cover_lp(A: BooleanMatrix, weighted: bool, max_rects: int | None = None) -> CoverLP:
    """min sum w(S) x_S, 0 <= x_S <= 1, one covering row per 1-entry.

    Unweighted: one column per maximal rectangle (every rectangle is dominated
    by a maximal one at equal cost).  Weighted: one column per rectangle, since
    a sub-rectangle is cheaper than its maximal hull.
    """
    if A.ones_count() == 0:
        raise ValueError("matrix has no 1-entries")
    max_rects = MAX_RECTS if max_rects is None else max_rects
    if weighted:
        rects = []
        for r in iter_rectangles(A, max_rows=min(A.m, 24)):
            rects.append(r)
            if len(rects) > max_rects:
                raise BudgetExceeded(f"more than {max_rects} rectangles")
        rects.sort(key=Rectangle.sort_key)
    else:
        rects = enumerate_maximal_rectangles(A, max_count=max_rects)
    return _cover_program(A, rects, weighted, upper_bounds=True)


@dataclass
class CoverSolution:
    value: Fraction
    covering: FractionalCovering
    duals: dict[tuple[int, int], Fraction]
    rounds: int = 1
    columns: int = 0


def best_rectangle(A: BooleanMatrix, y: dict[tuple[int, int], Fraction], weighted: bool = True):
    """Maximise sum_{R x C} y - cost(R, C) over all rectangles of A.

    Exhaustive over row subsets of the smaller side; for a fixed row set the
    best column set is read off column by column.  Returns (violation, rect).
    """
    transposed = A.n < A.m
    B = A.transpose() if transposed else A
    if B.m > MAX_CHECK_SIDE and not weighted:
        raise BudgetExceeded(f"smaller side {B.m} exceeds {MAX_CHECK_SIDE}")
    if B.m > MAX_CHECK_SIDE:
        raise BudgetExceeded(f"smaller side {B.m} exceeds {MAX_CHECK_SIDE}")
    vals = [v for v in y.values() if v]
    D = lcm(*(v.denominator for v in vals)) if vals else 1
    Y = [[0] * B.n for _ in range(B.m)]
    for (i, j), v in y.items():
        if v:
            if transposed:
                i, j = j, i
            Y[i][j] = int(v * D)
    unit_row = D if weighted else 0
    unit_col = D if weighted else 0
    best = [None, None]
    colsum = [0] * B.n

    def visit(start: int, rmask: int, nrows: int, common: int):
        if rmask:
            gain = 0
            cmask = 0
            top = None
            for c in bits(common):
                g = colsum[c] - unit_col
                if g > 0:
                    gain += g
                    cmask |= 1 << c
                if top is None or g > top[0]:
                    top = (g, c)
            if not cmask:
                gain, cmask = top[0], 1 << top[1]
            val = gain - unit_row * nrows - (0 if weighted else D)
            if best[0] is None or val > best[0]:
                best[0], best[1] = val, (rmask, cmask)
        for i in range(start, B.m):
            nxt = common & B.rows[i]
            if not nxt:
                continue
            row = Y[i]
            for c in bits(nxt):
                colsum[c] += row[c]
            visit(i + 1, rmask | (1 << i), nrows + 1, nxt)
            for c in bits(nxt):
                colsum[c] -= row[c]

    visit(0, 0, 0, (1 << B.n) - 1)
    if best[1] is None:
        raise ValueError("matrix has no 1-entries")
    rmask, cmask = best[1]
    rect = Rectangle.from_masks(rmask, cmask)
    if transposed:
        rect = rect.transpose()
    return Fraction(best[0], D), rect


def cover_lp(A: BooleanMatrix, weighted: bool, max_rounds: int = 500, batch: int = 12,
             max_rects: int | None = None) -> CoverSolution:
    """Optimal fractional covering and dual weights, exactly.

    Unweighted: solved over the maximal rectangles.  Weighted: column
    generation, starting from the maximal rectangles and pricing by
    :func:`best_rectangle` until no rectangle has positive reduced cost.
    """
    if A.ones_count() == 0:
        raise ValueError("matrix has no 1-entries")
    max_rects = MAX_RECTS if max_rects is None else max_rects
    rects = enumerate_maximal_rectangles(A, max_count=max_rects)
    rounds = 0
    while True:
        rounds += 1
        lpc = _cover_program(A, rects, weighted, upper_bounds=False)
        sol = solve_lp(lpc.program)
        y = {e: sol.duals[k] for k, e in enumerate(lpc.entries)}
        if not weighted:
            break
        fresh = _price_batch(A, y, set(rects), batch)
        if not fresh:
            break
        if rounds >= max_rounds:
            raise BudgetExceeded(f"column generation did not converge in {max_rounds} rounds")
        rects.extend(fresh)
        if len(rects) > max_rects:
            raise BudgetExceeded(f"more than {max_rects} LP columns")
    if sol.objective != sol.dual_objective or sum(y.values()) != sol.objective:
        raise LpError("primal and dual optima differ")
    weighted_rects = tuple((r, v) for r, v in zip(rects, sol.x) if v)
    return CoverSolution(sol.objective, FractionalCovering(A, weighted_rects), y, rounds, len(rects))


def _price_batch(A, y, known, batch):
    """Up to ``batch`` violated rectangles: the best one plus row/column trims of it."""
    viol, rect = best_rectangle(A, y, weighted=True)
    if viol <= 0:
        return []
    out = [rect]
    # cheap extra columns: best rectangle for each single row and single column
    extra = []
    for i in range(A.m):
        cols = [j for j in bits(A.rows[i]) if y.get((i, j), 0) > 1]
        if cols:
            r = Rectangle((i,), tuple(cols))
            v = sum(y[(i, j)] for j in cols) - r.cost
            if v > 0:
                extra.append((v, r))
    colmasks = A.columns()
    for j in range(A.n):
        rows_ = [i for i in bits(colmasks[j]) if y.get((i, j), 0) > 1]
        if rows_:
            r = Rectangle(tuple(rows_), (j,))
            v = sum(y[(i, j)] for i in rows_) - r.cost
            if v > 0:
                extra.append((v, r))
    extra.sort(key=lambda t: (-t[0], t[1].sort_key()))
    for _, r in extra:
        if len(out) >= batch:
            break
        if r not in known and r not in out:
            out.append(r)
    return [r for r in out if r not in known]


def fractional_rank(K: BooleanMatrix) -> Fraction:
    return cover_lp(K, weighted=False).value


def dual_weights(A: BooleanMatrix, weighted: bool) -> dict[tuple[int, int], Fraction]:
    """Optimal dual solution: one nonnegative value per 1-entry, summing to the LP optimum."""
    return cover_lp(A, weighted).duals


# -- dual certificates --------------------------------------------------------


@dataclass
class DualCertificate:
    """Per-entry dual values; entries not listed are 0."""

    m: int
    n: int
    values: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    @property
    def host_dims(self) -> tuple[int, int]:
        return (self.m, self.n)

    def total(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def get(self, i: int, j: int) -> Fraction:
        return self.values.get((i, j), Fraction(0))


def triangular_certificate(n: int) -> DualCertificate:
    """y(i, j) = 2 if j - i = 1, 1 if j - i = 2^q with q >= 1, else 0."""
    if n < 2:
        raise ValueError("triangular_certificate needs n >= 2")
    vals = {}
    for i in range(n):
        if i + 1 < n:
            vals[(i, i + 1)] = Fraction(2)
        step = 2
        while i + step < n:
            vals[(i, i + step)] = Fraction(1)
            step *= 2
    return DualCertificate(n, n, vals)


@dataclass
class CertificateCheck:
    feasible: bool
    worst_slack: Fraction
    witness: Rectangle | None
    value: Fraction
    method: str

    def __bool__(self) -> bool:
        return self.feasible


def _triangular_oracle(n: int, cert: DualCertificate):
    """Split-point enumeration: rectangles of T_n have max R = t < min C.

    For fixed t and C within {t+1..n-1}, the best rows are those i <= t with
    row sum over C above 1; returns (worst slack, witness).
    """
    worst = None
    y = [[int(cert.get(i, j) * 1) if cert.get(i, j).denominator == 1 else None for j in range(n)] for i in range(n)]
    exact = all(v is not None for row in y for v in row)
    if not exact:
        D = lcm(*(v.denominator for v in cert.values.values()))
        y = [[int(cert.get(i, j) * D) for j in range(n)] for i in range(n)]
    else:
        D = 1
    for t in range(n - 1):
        right = list(range(t + 1, n))
        rowsum = [0] * (t + 1)

        def rec(pos: int, chosen: list[int]):
            nonlocal worst
            if chosen:
                gains = [rowsum[i] - D for i in range(t + 1)]
                pos_g = [i for i in range(t + 1) if gains[i] > 0]
                if pos_g:
                    rows = pos_g
                    best = sum(gains[i] for i in pos_g)
                else:
                    top = max(range(t + 1), key=lambda i: (gains[i], -i))
                    rows, best = [top], gains[top]
                slack = D * len(chosen) - best
                if worst is None or slack < worst[0]:
                    worst = (slack, rows, list(chosen))
            for k in range(pos, len(right)):
                c = right[k]
                for i in range(t + 1):
                    rowsum[i] += y[i][c]
                chosen.append(c)
                rec(k + 1, chosen)
                chosen.pop()
                for i in range(t + 1):
                    rowsum[i] -= y[i][c]

        rec(0, [])
    slack, rows, cols = worst
    return Fraction(slack, D), Rectangle(tuple(rows), tuple(cols))


def verify_certificate(A: BooleanMatrix, cert: DualCertificate, method: str = "auto") -> CertificateCheck:
    """Check y >= 0 and sum_{R x C} y <= |R| + |C| for every rectangle of A.

    Triangular hosts use the split-point oracle; other hosts (or
    ``method='general'``) enumerate all row subsets of the smaller side.
    """
    if cert.host_dims != (A.m, A.n):
        raise ValueError(f"certificate is for {cert.host_dims}, host is {(A.m, A.n)}")
    value = cert.total()
    for (i, j), v in sorted(cert.values.items()):
        if not (0 <= i < A.m and 0 <= j < A.n) or not A.entry(i, j):
            if v != 0:
                raise ValueError(f"certificate assigns {v} to ({i},{j}), which is not a 1-entry")
        if v < 0:
            r = Rectangle((i,), (j,))
            return CertificateCheck(False, v, r, value, "sign")
    if method == "auto":
        method = "triangular" if A.is_triangular() else "general"
    if method == "triangular":
        if not A.is_triangular():
            raise ValueError("split-point oracle applies to triangular hosts only")
        if A.n < 2:
            raise ValueError("T_1 has no rectangles")
        slack, wit = _triangular_oracle(A.n, cert)
    elif method == "general":
        viol, wit = best_rectangle(A, cert.values, weighted=True)
        slack = -viol
    else:
        raise ValueError(f"unknown method {method!r}")
    return CertificateCheck(slack >= 0, slack, wit, value, method)


def uniform_certificate(A: BooleanMatrix, mu: Fraction) -> DualCertificate:
    return DualCertificate(A.m, A.n, {e: Fraction(mu) for e in A.ones()})


def triangular_lower_bound(n: int) -> int:
    """Value of the triangular certificate, s(n)."""
    return triangular_or2(n)


# -- .dc text format ----------------------------------------------------------


def format_dc(cert: DualCertificate) -> str:
    lines = [f"{cert.m} {cert.n}"]
    for (i, j), v in sorted(cert.values.items()):
        lines.append(f"{i} {j} {v.numerator}/{v.denominator}")
    return "\n".join(lines) + "\n"


def parse_dc(text: str) -> DualCertificate:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty input", 1)
    head = lines[0].split()
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise FormatError(f"header must be 'm n', got {lines[0]!r}", 1)
    m, n = map(int, head)
    vals = {}
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3 or not parts[0].isdigit() or not parts[1].isdigit() or "/" not in parts[2]:
            raise FormatError(f"expected '<i> <j> <p>/<q>', got {line!r}", k)
        i, j = int(parts[0]), int(parts[1])
        if i >= m or j >= n:
            raise FormatError(f"entry ({i},{j}) outside {m}x{n}", k)
        if (i, j) in vals:
            raise FormatError(f"entry ({i},{j}) repeated", k)
        try:
            p, q = parts[2].split("/")
            vals[(i, j)] = Fraction(int(p), int(q))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad value {parts[2]!r}", k) from None
    return DualCertificate(m, n, vals)
