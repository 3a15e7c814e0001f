"""Exact small-instance solvers and the direct-product verification harness.

exact_or2 / exact_sum2 / exact_boolean_rank are depth-first branch and
bound searches.  The lower bound at a node is the sum, over the still
uncovered 1-entries, of a fixed optimal dual solution of the cover LP of
the whole host: dropping covered entries only loosens the dual
constraints, so the restricted sum stays a valid bound for the residual.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import lcm

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

from .boolmat import BooleanMatrix, bits, kronecker, popcount
from .covers import (
    BudgetExceeded,
    Covering,
    Rectangle,
    enumerate_maximal_rectangles,
    is_partition,
    iter_rectangles,
)
from .lp import cover_lp
from .network import RectifierNetwork, express, extract_subnetwork, is_unambiguous

DEFAULT_NODE_BUDGET = 10**7
MAX_LP_RECTS = 20000
DUAL_SCALE = 1 << 24
# residual LPs are re-solved at nodes shallower than this; 0 means only the static root dual is used
# (re-solving deeper costs more time than it saves on the Kneser blocks)
LP_DEPTH = 0


@dataclass
class ExactResult:
    """Best covering found; ``optimal`` is False when the node budget ran out.

    ``lower_bound`` is always a proven lower bound on the optimum.
    """

    cost: int
    covering: Covering
    optimal: bool
    lower_bound: int
    nodes: int = 0
    # "search" when every component was settled by branch and bound, else "milp"
    solver: str = "search"

    def __iter__(self):
        # allows ``cost, cov = exact_or2(A)``
        return iter((self.cost, self.covering))


def _components(A: BooleanMatrix) -> list[tuple[list[int], list[int]]]:
    """Connected components of the bipartite graph of 1-entries (rows, cols)."""
    cols = A.columns()
    seen_r = [False] * A.m
    out = []
    for start in range(A.m):
        if seen_r[start] or not A.rows[start]:
            continue
        rmask, cmask = 0, 0
        frontier_r = 1 << start
        while frontier_r:
            rmask |= frontier_r
            newc = 0
            for i in bits(frontier_r):
                newc |= A.rows[i]
            newc &= ~cmask
            cmask |= newc
            newr = 0
            for j in bits(newc):
                newr |= cols[j]
            frontier_r = newr & ~rmask
        for i in bits(rmask):
            seen_r[i] = True
        out.append((list(bits(rmask)), list(bits(cmask))))
    return out


def _scaled_duals(A: BooleanMatrix, weighted: bool):
    sol = cover_lp(A, weighted)
    vals = [v for v in sol.duals.values() if v]
    D = lcm(*(v.denominator for v in vals)) if vals else 1
    y = [[0] * A.n for _ in range(A.m)]
    for (i, j), v in sol.duals.items():
        y[i][j] = int(v * D)
    return y, D, sol.value


class _ResidualLP:
    """Dual bound for a residual instance from the cover LP over an explicit family.

    The LP is solved in floating point; its duals are rounded down to
    integers over DUAL_SCALE, checked exactly against every rectangle of
    the family and divided by the worst ratio, so the result is an exactly
    feasible dual solution (returned as integer numerators over a common
    denominator).
    """

    def __init__(self, A: BooleanMatrix, family: list[tuple[int, int]], weights: list[int], inside_only: bool):
        self.cells = list(A.ones())
        self.index = {e: t for t, e in enumerate(self.cells)}
        inc = np.zeros((len(family), len(self.cells)), dtype=np.int64)
        for s, (rm, cm) in enumerate(family):
            for i in bits(rm):
                for j in bits(cm):
                    inc[s, self.index[(i, j)]] = 1
        self.inc = inc
        self.w = np.array(weights, dtype=np.int64)
        self.inside_only = inside_only
        self.shape = (A.m, A.n)
        self.solves = 0

    def dual(self, U: list[int]):
        umask = np.zeros(len(self.cells), dtype=bool)
        for i, r in enumerate(U):
            for j in bits(r):
                umask[self.index[(i, j)]] = True
        if self.inside_only:
            keep = ~(self.inc[:, ~umask].any(axis=1))
        else:
            keep = self.inc[:, umask].any(axis=1)
        sub = self.inc[keep][:, umask]
        w = self.w[keep]
        self.solves += 1
        res = linprog(w.astype(float), A_ub=-sub.T.astype(float), b_ub=-np.ones(sub.shape[1]),
                      bounds=(0, None), method="highs")
        if res.status != 0:
            return None
        y = np.floor(np.maximum(-res.ineqlin.marginals, 0.0) * DUAL_SCALE).astype(np.int64)
        sums = sub @ y
        ratio = sums / (w * float(DUAL_SCALE))
        top = ratio.max()
        lam = Fraction(1)
        for t in np.nonzero(ratio >= top * (1 - 1e-9))[0]:
            lam = max(lam, Fraction(int(sums[t]), int(w[t]) * DUAL_SCALE))
        num, den = lam.denominator, DUAL_SCALE * lam.numerator
        out = [[0] * self.shape[1] for _ in range(self.shape[0])]
        for t, v in zip(np.nonzero(umask)[0], y):
            if v:
                i, j = self.cells[t]
                out[i][j] = int(v) * num
        return out, den


def _ceil(v: Fraction) -> int:
    return -((-v.numerator) // v.denominator)


class _Search:
    """Branch and bound for one connected host.

    mode: 'or2' (any rectangle of the host, trimmed to rows/cols that still
    cover something new), 'sum2' (rectangles inside the residual), 'rank'
    (maximal rectangles, unit cost).  Costs are integers; a dual solution
    (y, D) with y integer prices every candidate by its reduced cost
    D * w(Q) - sum_{Q and U} y.
    """

    def __init__(self, A: BooleanMatrix, mode: str, budget: int):
        self.A = A
        self.mode = mode
        self.budget = budget
        self.nodes = 0
        self.exhausted = False
        self.cols = A.columns()
        if mode == "rank":
            self.maximal = enumerate_maximal_rectangles(A)
        # static dual: rescaled float LP when the family fits, exact LP otherwise
        self.lp = self._residual_lp()
        d = self.lp.dual(list(A.rows)) if self.lp is not None else None
        if d is not None:
            self.y, self.D = d
        else:
            self.y, self.D, _ = _scaled_duals(A, weighted=(mode != "rank"))

    def _residual_lp(self):
        if self.mode == "rank":
            fam = [(r.row_mask, r.col_mask) for r in self.maximal]
            return _ResidualLP(self.A, fam, [1] * len(fam), inside_only=False)
        fam = []
        for r in iter_rectangles(self.A, max_rows=64):
            fam.append((r.row_mask, r.col_mask))
            if len(fam) > MAX_LP_RECTS:
                return None
        return _ResidualLP(self.A, fam, [popcount(a) + popcount(b) for a, b in fam], inside_only=(self.mode == "sum2"))

    def weight(self, rmask: int, cmask: int) -> int:
        return 1 if self.mode == "rank" else popcount(rmask) + popcount(cmask)

    @staticmethod
    def residual_sum(y, U: list[int]) -> int:
        return sum(y[i][j] for i, r in enumerate(U) for j in bits(r))

    def candidates(self, U: list[int], e: tuple[int, int], y, D: int, gap: int):
        """Rectangles containing e with scaled reduced cost below ``gap``, cheapest first."""
        if self.mode == "rank":
            out = []
            for r in self.maximal:
                if e in r:
                    rc = D - sum(y[i][j] for i in r.rows for j in bits(U[i] & r.col_mask))
                    if rc < gap:
                        out.append((rc, r.sort_key(), r.row_mask, r.col_mask))
            out.sort()
            return out
        i0, j0 = e
        host = self.A.rows if self.mode == "or2" else U
        if self.mode == "or2":
            colmask = self.cols[j0]
        else:
            colmask = 0
            for i in range(self.A.m):
                if (U[i] >> j0) & 1:
                    colmask |= 1 << i
        others = [i for i in bits(colmask) if i != i0]
        out = []
        for size in range(len(others) + 1):
            for extra in combinations(others, size):
                R = (i0,) + extra
                common = host[i0]
                for i in extra:
                    common &= host[i]
                # each column adds D for its cost minus the prices it collects
                contrib = []
                forced = None
                for c in bits(common):
                    v = D
                    for i in R:
                        if (U[i] >> c) & 1:
                            v -= y[i][c]
                    if c == j0:
                        forced = v
                    else:
                        contrib.append((v, c))
                base = D * len(R) + forced
                if base + sum(v for v, _ in contrib if v < 0) >= gap:
                    continue
                contrib.sort()
                suffix_neg = [0] * (len(contrib) + 1)
                for t in range(len(contrib) - 1, -1, -1):
                    suffix_neg[t] = suffix_neg[t + 1] + min(0, contrib[t][0])
                rmask = 0
                for i in R:
                    rmask |= 1 << i
                self._enum_cols(contrib, suffix_neg, 0, base, 1 << j0, gap, rmask, U, out)
        out.sort()
        return out

    def _enum_cols(self, contrib, suffix_neg, t, acc, cmask, gap, rmask, U, out):
        if acc + suffix_neg[t] >= gap:
            return
        if t == len(contrib):
            if self.mode == "or2" and not self._essential(rmask, cmask, U):
                return
            r = Rectangle.from_masks(rmask, cmask)
            out.append((acc, r.sort_key(), rmask, cmask))
            return
        v, c = contrib[t]
        self._enum_cols(contrib, suffix_neg, t + 1, acc + v, cmask | (1 << c), gap, rmask, U, out)
        self._enum_cols(contrib, suffix_neg, t + 1, acc, cmask, gap, rmask, U, out)

    def _essential(self, rmask, cmask, U) -> bool:
        seen = 0
        for i in bits(rmask):
            hit = U[i] & cmask
            if not hit:
                return False
            seen |= hit
        return seen == cmask

    def run(self, incumbent: tuple[int, list] | None):
        U = list(self.A.rows)
        root = Fraction(self.residual_sum(self.y, U), self.D)
        self.root_bound = _ceil(root)
        self.best = incumbent  # (cost, [(rmask, cmask), ...])
        self._dfs(U, 0, root, [])
        return self.best

    def _dfs(self, U, cost, parent_bound: Fraction, chosen):
        if self.exhausted:
            return
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        e = None
        for i, r in enumerate(U):
            if r:
                e = (i, (r & -r).bit_length() - 1)
                break
        if e is None:
            if self.best is None or cost < self.best[0]:
                self.best = (cost, list(chosen))
            return
        best = self.best[0] if self.best is not None else None
        # integral costs: only a subtree whose bound is <= best - 1 can improve
        if best is not None and cost + parent_bound > best - 1:
            return
        y, D = self.y, self.D
        if self.lp is not None and best is not None and len(chosen) < LP_DEPTH:
            d = self.lp.dual(U)
            if d is not None:
                y, D = d
        total = self.residual_sum(y, U)
        if best is not None and cost * D + total > (best - 1) * D:
            return
        gap = ((best - 1 - cost) * D - total + 1) if best is not None else 1 << 62
        for rc, _, rmask, cmask in self.candidates(U, e, y, D, gap):
            if self.best is not None and cost * D + total + rc > (self.best[0] - 1) * D:
                break
            saved = []
            for i in bits(rmask):
                saved.append((i, U[i]))
                U[i] &= ~cmask
            w = self.weight(rmask, cmask)
            child = Fraction(total + rc - w * D, D)
            chosen.append((rmask, cmask))
            self._dfs(U, cost + w, child, chosen)
            chosen.pop()
            for i, v in saved:
                U[i] = v
            if self.exhausted:
                return


def _greedy_incumbent(A: BooleanMatrix, mode: str):
    """Ratio greedy over maximal rectangles (trimmed); for sum2, whole rows or whole columns."""
    if mode == "sum2":
        chosen = [(1 << i, r) for i, r in enumerate(A.rows) if r]
        cost = sum(1 + popcount(c) for _, c in chosen)
        cols = A.columns()
        alt = [(rm, 1 << j) for j, rm in enumerate(cols) if rm]
        alt_cost = sum(1 + popcount(r) for r, _ in alt)
        return (cost, chosen) if cost <= alt_cost else (alt_cost, alt)
    rects = enumerate_maximal_rectangles(A)
    U = list(A.rows)
    chosen = []
    while any(U):
        best = None
        for r in rects:
            rm, cm = 0, 0
            gain = 0
            for i in r.rows:
                hit = U[i] & r.col_mask
                if hit:
                    rm |= 1 << i
                    cm |= hit
            if not rm:
                continue
            for i in bits(rm):
                gain += popcount(U[i] & cm)
            w = 1 if mode == "rank" else popcount(rm) + popcount(cm)
            key = Fraction(gain, w)
            if best is None or key > best[0]:
                best = (key, rm, cm)
        _, rm, cm = best
        if mode == "rank":
            r = next(r for r in rects if r.row_mask & rm == rm and r.col_mask & cm == cm)
            rm, cm = r.row_mask, r.col_mask
        chosen.append((rm, cm))
        for i in bits(rm):
            U[i] &= ~cm
    if mode == "rank":
        return len(chosen), chosen
    return sum(popcount(r) + popcount(c) for r, c in chosen), chosen


def _milp_component(A: BooleanMatrix, mode: str, incumbent: int, time_limit: float | None):
    """HiGHS MILP over the explicit rectangle family (all rectangles; maximal ones for rank).

    Returns (cost, chosen masks, proven lower bound) or None when no solution came back.
    The covering is checked exactly by the caller; the lower bound is the solver's
    dual bound rounded up, which is exact here because all costs are integers.
    """
    if mode == "rank":
        fam = [(r.row_mask, r.col_mask) for r in enumerate_maximal_rectangles(A)]
        w = np.ones(len(fam))
    else:
        fam = [(r.row_mask, r.col_mask) for r in iter_rectangles(A, max_rows=64)]
        w = np.array([popcount(a) + popcount(b) for a, b in fam], dtype=float)
    cells = {e: t for t, e in enumerate(A.ones())}
    inc = np.zeros((len(cells), len(fam)))
    for s, (rm, cm) in enumerate(fam):
        for i in bits(rm):
            for j in bits(cm):
                inc[cells[(i, j)], s] = 1
    ub = np.inf if mode != "sum2" else 1
    opts = {"mip_rel_gap": 0.0}
    if time_limit is not None:
        opts["time_limit"] = time_limit
    res = milp(w, constraints=LinearConstraint(inc, lb=1, ub=ub), integrality=np.ones(len(fam)),
               bounds=Bounds(0, 1), options=opts)
    if res.x is None:
        return None
    chosen = [fam[s] for s in np.nonzero(res.x > 0.5)[0]]
    cost = int(sum(popcount(a) + popcount(b) for a, b in chosen)) if mode != "rank" else len(chosen)
    bound = getattr(res, "mip_dual_bound", None)
    lower = int(np.ceil(bound - 1e-6)) if bound is not None and np.isfinite(bound) else 0
    return cost, chosen, min(lower, cost)


def _solve(A: BooleanMatrix, mode: str, budget: int, fallback: bool = False,
           time_limit: float | None = None) -> ExactResult:
    if A.ones_count() == 0:
        return ExactResult(0, Covering(A, ()), True, 0, 0)
    rects: list[Rectangle] = []
    total = 0
    lower = 0
    optimal = True
    nodes = 0
    solver = "search"
    for rows, cols in _components(A):
        sub = A.submatrix(rows, cols)
        s = _Search(sub, mode, max(1, budget - nodes))
        best = s.run(_greedy_incumbent(sub, mode))
        nodes += s.nodes
        c, chosen = best
        bound = c if not s.exhausted else s.root_bound
        if s.exhausted and fallback:
            got = _milp_component(sub, mode, c, time_limit)
            if got is not None:
                solver = "milp"
                mc, mchosen, mlow = got
                if mc <= c and _checks_out(sub, mode, mchosen):
                    c, chosen = mc, mchosen
                bound = max(bound, min(mlow, c))
        total += c
        lower += bound
        if bound < c:
            optimal = False
        for rm, cm in chosen:
            rects.append(Rectangle(tuple(rows[i] for i in bits(rm)), tuple(cols[j] for j in bits(cm))))
    rects.sort(key=Rectangle.sort_key)
    return ExactResult(total, Covering(A, tuple(rects)), optimal, lower, nodes, solver)


def _checks_out(A: BooleanMatrix, mode: str, chosen) -> bool:
    seen = [0] * A.m
    for rm, cm in chosen:
        for i in bits(rm):
            if (A.rows[i] & cm) != cm:
                return False
            if mode == "sum2" and seen[i] & cm:
                return False
            seen[i] |= cm
    return seen == list(A.rows)


def exact_or2(A: BooleanMatrix, budget: int = DEFAULT_NODE_BUDGET, fallback: bool = False,
              time_limit: float | None = None) -> ExactResult:
    """Minimum-cost covering (cost |R|+|C| per rectangle).

    With ``fallback`` a component whose search runs out of budget is handed to
    the HiGHS MILP; its answer is validated exactly before it is accepted.
    """
    return _solve(A, "or2", budget, fallback, time_limit)


def exact_sum2(A: BooleanMatrix, budget: int = DEFAULT_NODE_BUDGET, fallback: bool = False,
               time_limit: float | None = None) -> ExactResult:
    """Minimum-cost partition: every 1-entry covered exactly once."""
    res = _solve(A, "sum2", budget, fallback, time_limit)
    if res.covering.rectangles and not is_partition(res.covering):
        raise AssertionError("internal error: sum2 witness overlaps")
    return res


def exact_boolean_rank(A: BooleanMatrix, budget: int = DEFAULT_NODE_BUDGET, fallback: bool = False) -> int:
    res = _solve(A, "rank", budget, fallback)
    if not res.optimal:
        raise BudgetExceeded(f"boolean rank search exceeded {budget} nodes (best {res.cost}, bound {res.lower_bound})")
    return res.cost


def boolean_rank_result(A: BooleanMatrix, budget: int = DEFAULT_NODE_BUDGET, fallback: bool = False) -> ExactResult:
    return _solve(A, "rank", budget, fallback)


def naive_or2(A: BooleanMatrix, max_ones: int = 16) -> int:
    """Memoised recursion over subsets of 1-entries; all rectangles; tiny hosts only."""
    ones = list(A.ones())
    if len(ones) > max_ones:
        raise BudgetExceeded(f"{len(ones)} ones exceeds {max_ones}")
    index = {e: t for t, e in enumerate(ones)}
    rect_masks = []
    for r in iter_rectangles(A):
        m = 0
        for cell in r.cells():
            m |= 1 << index[cell]
        rect_masks.append((m, r.cost))

    @lru_cache(maxsize=None)
    def f(left: int) -> int:
        if not left:
            return 0
        low = left & -left
        return min(c + f(left & ~m) for m, c in rect_masks if m & low)

    return f((1 << len(ones)) - 1)


def naive_sum2(A: BooleanMatrix, max_ones: int = 16) -> int:
    ones = list(A.ones())
    if len(ones) > max_ones:
        raise BudgetExceeded(f"{len(ones)} ones exceeds {max_ones}")
    index = {e: t for t, e in enumerate(ones)}
    rect_masks = []
    for r in iter_rectangles(A):
        m = 0
        for cell in r.cells():
            m |= 1 << index[cell]
        rect_masks.append((m, r.cost))

    @lru_cache(maxsize=None)
    def f(left: int) -> int:
        if not left:
            return 0
        low = left & -left
        return min(c + f(left & ~m) for m, c in rect_masks if m & low and m & left == m)

    return f((1 << len(ones)) - 1)


class NechiporukError(ValueError):
    def __init__(self, message: str, witness: Rectangle):
        self.witness = witness
        super().__init__(message)


def nechiporuk_bound(A: BooleanMatrix, k: int, l: int, max_subsets: int = 10**6) -> Fraction:
    """|A| / (k l), provided A has no all-1 (k+1) x (l+1) submatrix."""
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    checked = 0
    for rows in combinations(range(A.m), k + 1):
        checked += 1
        if checked > max_subsets:
            raise BudgetExceeded(f"more than {max_subsets} row subsets")
        common = (1 << A.n) - 1
        for i in rows:
            common &= A.rows[i]
        if popcount(common) >= l + 1:
            cols = tuple(list(bits(common))[: l + 1])
            wit = Rectangle(rows, cols)
            raise NechiporukError(f"all-1 {k + 1}x{l + 1} submatrix at rows {rows}, cols {cols}", wit)
    return Fraction(A.ones_count(), k * l)


# -- direct product harness ----------------------------------------------------


@dataclass
class EdgeRectangle:
    edge: tuple[int, int]
    to_rows: tuple[int, ...]
    from_cols: tuple[int, ...]
    weight: Fraction  # w'(e)


@dataclass
class SubnetworkRecord:
    i1: int
    j1: int
    edges: int
    expresses_M: bool
    unambiguous: bool | None = None


@dataclass
class DirectProductReport:
    K: BooleanMatrix
    M: BooleanMatrix
    total_edges: int
    frac_rank: Fraction
    weights: dict[tuple[int, int], Fraction]
    edge_rects: list[EdgeRectangle]
    subnetworks: list[SubnetworkRecord]
    check_sum: bool = False
    violations: list[str] = field(default_factory=list)

    @property
    def weight_sum(self) -> Fraction:
        return sum((e.weight for e in self.edge_rects), Fraction(0))

    @property
    def min_edges(self) -> int:
        return min(s.edges for s in self.subnetworks)

    @property
    def chain_bound(self) -> Fraction:
        return self.frac_rank * self.min_edges

    @property
    def ok(self) -> bool:
        return not self.violations

    def text(self) -> str:
        out = [
            "# direct-product chain check; min_edges is the smallest extracted",
            "# subnetwork and serves as a >= OR(M) surrogate, not the true OR(M)",
            "EDGES",
        ]
        for e in self.edge_rects:
            out.append(
                f"{e.edge[0]} {e.edge[1]} to={','.join(map(str, e.to_rows)) or '-'} "
                f"from={','.join(map(str, e.from_cols)) or '-'} w={_q(e.weight)}"
            )
        out.append("SUBNETWORKS")
        for s in self.subnetworks:
            line = f"{s.i1} {s.j1} edges={s.edges} expresses_M={'yes' if s.expresses_M else 'no'}"
            if s.unambiguous is not None:
                line += f" unambiguous={'yes' if s.unambiguous else 'no'}"
            out.append(line)
        out.append("CHAIN")
        out.append(f"edges {self.total_edges}")
        out.append(f"sum_w_prime {_q(self.weight_sum)}")
        out.append(f"frac_rank {_q(self.frac_rank)}")
        out.append(f"min_edges {self.min_edges} (>= OR(M) surrogate)")
        out.append(f"bound {_q(self.chain_bound)}")
        out.append(f"holds {'yes' if self.ok else 'no'}")
        for v in self.violations:
            out.append(f"violation {v}")
        return "\n".join(out) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["section", "a", "b", "value", "detail"])
        for e in self.edge_rects:
            w.writerow(["edge", e.edge[0], e.edge[1], _q(e.weight), ""])
        for s in self.subnetworks:
            w.writerow(["subnetwork", s.i1, s.j1, s.edges, "expresses" if s.expresses_M else "fails"])
        w.writerow(["chain", "edges", "", self.total_edges, ""])
        w.writerow(["chain", "sum_w_prime", "", _q(self.weight_sum), ""])
        w.writerow(["chain", "frac_rank", "", _q(self.frac_rank), ""])
        w.writerow(["chain", "min_edges", "", self.min_edges, "surrogate"])
        w.writerow(["chain", "bound", "", _q(self.chain_bound), "holds" if self.ok else "violated"])
        return buf.getvalue()


def _q(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class DirectProductError(ValueError):
    pass


def verify_direct_product(K: BooleanMatrix, M: BooleanMatrix, net: RectifierNetwork, unambiguous: bool = False) -> DirectProductReport:
    """Evaluate |E| >= sum_e w'(e) = sum w(i1,j1) |E(N_{j1~>i1})| >= rk*(K) min_edges."""
    Q = kronecker(K, M)
    if (net.outputs, net.inputs) != (Q.m, Q.n) or express(net) != Q:
        raise DirectProductError("network does not express the Kronecker product")
    if unambiguous and not is_unambiguous(net):
        raise DirectProductError("network is ambiguous")
    sol = cover_lp(K, weighted=False)
    w = sol.duals
    m2, n2 = M.m, M.n
    to = net.reach_rows()
    frm = net.reach_cols()
    edge_rects = []
    violations = []
    for u, v in net.edges:
        rows = tuple(bits(to[v]))
        cols = tuple(bits(frm[u]))
        r1 = sorted({i // m2 for i in rows})
        c1 = sorted({j // n2 for j in cols})
        wp = sum((w.get((i1, j1), Fraction(0)) for i1 in r1 for j1 in c1 if K.entry(i1, j1)), Fraction(0))
        if rows and cols:
            # (To, From) must be a rectangle of the product
            for i in rows:
                if Q.rows[i] & frm[u] != frm[u]:
                    violations.append(f"edge {u}->{v}: (To, From) is not a rectangle")
                    break
        if wp > 1:
            violations.append(f"edge {u}->{v}: w' = {_q(wp)} > 1")
        edge_rects.append(EdgeRectangle((u, v), rows, cols, wp))
    subs = []
    weighted_edges = Fraction(0)
    for i1 in range(K.m):
        for j1 in range(K.n):
            if not K.entry(i1, j1):
                continue
            ins = [net.in_map[j1 * n2 + j2] for j2 in range(n2)]
            outs = [net.out_map[i1 * m2 + i2] for i2 in range(m2)]
            sub, _ = extract_subnetwork(net, ins, outs, ins, outs)
            ok = express(sub, m2, n2) == M
            if not ok:
                violations.append(f"subnetwork ({i1},{j1}) does not express M")
            rec = SubnetworkRecord(i1, j1, sub.size, ok)
            if unambiguous:
                rec.unambiguous = is_unambiguous(sub)
                if not rec.unambiguous:
                    violations.append(f"subnetwork ({i1},{j1}) is ambiguous")
            subs.append(rec)
            weighted_edges += w.get((i1, j1), Fraction(0)) * sub.size
    rep = DirectProductReport(K, M, net.size, sol.value, dict(w), edge_rects, subs, unambiguous, violations)
    if rep.weight_sum != weighted_edges:
        violations.append(f"sum w'(e) = {_q(rep.weight_sum)} differs from sum w |E(N)| = {_q(weighted_edges)}")
    if not rep.total_edges >= rep.weight_sum:
        violations.append("|E| < sum w'(e)")
    if not weighted_edges >= rep.chain_bound:
        violations.append("sum w |E(N)| < rk*(K) min_edges")
    if not rep.total_edges >= rep.chain_bound:
        violations.append("|E| < rk*(K) min_edges")
    return rep


def verify_direct_product_sum(K: BooleanMatrix, M: BooleanMatrix, net: RectifierNetwork) -> DirectProductReport:
    """Same chain for unambiguous networks; every subnetwork must be unambiguous too."""
    return verify_direct_product(K, M, net, unambiguous=True)
