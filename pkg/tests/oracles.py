"""Independent reference computations used by the tests.

Nothing here calls into the package's solvers: rectangles are enumerated
from scratch, small optima come from a shortest-path search over covered
cell sets, LP values from HiGHS in floating point.
"""

from fractions import Fraction
from heapq import heappop, heappush
from itertools import combinations
from math import comb

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp


def ones(rows, n):
    return [(i, j) for i, r in enumerate(rows) for j in range(n) if (r >> j) & 1]


def all_rectangles(rows, n):
    """Every (R, C) with R, C nonempty and all entries 1, as (row tuple, col tuple)."""
    m = len(rows)
    out = []
    for a in range(1, m + 1):
        for R in combinations(range(m), a):
            common = (1 << n) - 1
            for i in R:
                common &= rows[i]
            cols = [j for j in range(n) if (common >> j) & 1]
            for b in range(1, len(cols) + 1):
                for C in combinations(cols, b):
                    out.append((R, C))
    return out


def min_cover(rows, n, partition=False, unit=False):
    """Dijkstra over subsets of covered 1-entries; fine up to ~14 ones."""
    cells = ones(rows, n)
    idx = {e: t for t, e in enumerate(cells)}
    full = (1 << len(cells)) - 1
    rects = []
    for R, C in all_rectangles(rows, n):
        mask = 0
        for i in R:
            for j in C:
                mask |= 1 << idx[(i, j)]
        rects.append((1 if unit else len(R) + len(C), mask))
    dist = {0: 0}
    heap = [(0, 0)]
    while heap:
        d, s = heappop(heap)
        if s == full:
            return d
        if d > dist[s]:
            continue
        # branch on the lowest uncovered entry
        low = (~s & full) & -(~s & full)
        for w, mask in rects:
            if not mask & low:
                continue
            if partition and mask & s:
                continue
            t = s | mask
            if d + w < dist.get(t, 1 << 60):
                dist[t] = d + w
                heappush(heap, (d + w, t))
    raise ValueError("no cover")


def lp_cover_value(rows, n, weighted=True):
    """Float LP optimum of the cover relaxation over all rectangles."""
    cells = ones(rows, n)
    idx = {e: t for t, e in enumerate(cells)}
    rects = all_rectangles(rows, n)
    M = np.zeros((len(cells), len(rects)))
    for s, (R, C) in enumerate(rects):
        for i in R:
            for j in C:
                M[idx[(i, j)], s] = 1
    w = np.array([len(R) + len(C) if weighted else 1 for R, C in rects], float)
    res = linprog(w, A_ub=-M, b_ub=-np.ones(len(cells)), bounds=(0, None), method="highs")
    return res.fun


def milp_or2(rows, n):
    cells = ones(rows, n)
    idx = {e: t for t, e in enumerate(cells)}
    rects = all_rectangles(rows, n)
    M = np.zeros((len(cells), len(rects)))
    for s, (R, C) in enumerate(rects):
        for i in R:
            for j in C:
                M[idx[(i, j)], s] = 1
    w = np.array([len(R) + len(C) for R, C in rects], float)
    res = milp(w, constraints=LinearConstraint(M, lb=1), integrality=np.ones(len(rects)),
               bounds=Bounds(0, 1), options={"mip_rel_gap": 0})
    return round(res.fun)


def s_recurrence(n):
    """s(1) = 0, s(n+1) = s(n) + floor(log2 n) + 2."""
    s = 0
    for t in range(1, n):
        s += t.bit_length() - 1 + 2
    return s


def triangular_rows(n):
    return [sum(1 << j for j in range(i + 1, n)) for i in range(n)]


def kneser_rows(k, x, y):
    xs = [sum(1 << t for t in c) for c in combinations(range(k), x)]
    ys = [sum(1 << t for t in c) for c in combinations(range(k), y)]
    return [sum(1 << j for j, c in enumerate(ys) if not r & c) for r in xs], len(ys)


def count_triples(k, x, y, ell):
    """#{(X, Y, S): |X|=x, |Y|=y, |S|=ell, X <= S, Y disjoint from S}, by enumeration."""
    total = 0
    for S in combinations(range(k), ell):
        rest = [t for t in range(k) if t not in S]
        total += sum(1 for _ in combinations(S, x)) * sum(1 for _ in combinations(rest, y))
    return total


def mu_brute(k, x, y):
    return min(Fraction(1, comb(l, x)) + Fraction(1, comb(k - l, y)) for l in range(x, k - y + 1))
