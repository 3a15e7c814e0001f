"""Greedy set cover and the bipartition coverings of disjointness matrices.

The blocks D^{x,y}_[k] (x-subsets against y-subsets of {1..k}, 1 iff
disjoint) are covered by rectangles coming from ordered bipartitions
(S, complement of S) with |S| = ell: rows are the x-subsets of S, columns
the y-subsets of the complement.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Sequence

from .boolmat import BooleanMatrix, bits, disjointness, kneser_submatrix, mask_of, subsets_lex
from .covers import Covering, FractionalCovering, Rectangle, covering_cost

MAX_FULL_COVER_K = 14


@dataclass(frozen=True)
class SetCoverInstance:
    universe_size: int
    sets: tuple[tuple[int, ...], ...]
    weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(tuple(sorted(set(s))) for s in self.sets))
        if self.weights is not None:
            w = tuple(Fraction(v) for v in self.weights)
            if len(w) != len(self.sets):
                raise ValueError("one weight per set required")
            if any(v <= 0 for v in w):
                raise ValueError("weights must be positive")
            object.__setattr__(self, "weights", w)
        for s in self.sets:
            if s and not (0 <= s[0] and s[-1] < self.universe_size):
                raise ValueError("set element outside the universe")

    def density(self) -> Fraction:
        """Largest gamma with every element in at least gamma * |sets| sets."""
        counts = [0] * self.universe_size
        for s in self.sets:
            for e in s:
                counts[e] += 1
        return Fraction(min(counts), len(self.sets)) if self.sets and counts else Fraction(0)


def greedy_cover(inst: SetCoverInstance) -> list[int]:
    """Repeatedly take the set covering most uncovered elements (per unit weight).

    Ties go to the smallest set index.
    """
    members: list[list[int]] = [[] for _ in range(inst.universe_size)]
    for idx, s in enumerate(inst.sets):
        for e in s:
            members[e].append(idx)
    if any(not ms for ms in members):
        e = next(e for e, ms in enumerate(members) if not ms)
        raise ValueError(f"infeasible instance: element {e} lies in no set")
    gain = [len(s) for s in inst.sets]
    covered = [False] * inst.universe_size
    left = inst.universe_size
    chosen = []
    w = inst.weights
    while left:
        if w is None:
            best = max(range(len(gain)), key=lambda i: (gain[i], -i))
        else:
            best = max(range(len(gain)), key=lambda i: (Fraction(gain[i]) / w[i], -i))
        chosen.append(best)
        for e in inst.sets[best]:
            if not covered[e]:
                covered[e] = True
                left -= 1
                for idx in members[e]:
                    gain[idx] -= 1
    return chosen


def _ln(x: Fraction, prec: int = 60) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = prec
        return (Decimal(x.numerator) / Decimal(x.denominator)).ln()


def greedy_bound(gamma: Fraction, universe: int) -> Fraction:
    """ceil((1/gamma) ln+(gamma |U|)) + 1/gamma."""
    gamma = Fraction(gamma)
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    arg = gamma * universe
    if arg <= 1:
        head = 0
    else:
        with localcontext() as ctx:
            ctx.prec = 60
            val = _ln(arg) * Decimal(gamma.denominator) / Decimal(gamma.numerator)
            head = int(val.to_integral_value(rounding="ROUND_CEILING"))
    return Fraction(head) + 1 / gamma


def f_value(k: int, x: int, y: int) -> Fraction:
    """Multinomial k!/(x! z! (k-x-z)!) over C(2z, z), with z = (k-x-y)/2."""
    if not (0 <= y <= x <= k) or x + y > k:
        raise ValueError(f"need 0 <= y <= x and x + y <= k, got k={k}, x={x}, y={y}")
    if (k - x - y) % 2:
        raise ValueError(f"k - x - y must be even, got {k - x - y}")
    z = (k - x - y) // 2
    multi = factorial(k) // (factorial(x) * factorial(z) * factorial(k - x - z))
    return Fraction(multi, comb(2 * z, z))


def split_size(k: int, x: int, y: int) -> int:
    """ell = x + ceil((k - x - y) / 2)."""
    return x + (k - x - y + 1) // 2


def block_density(k: int, x: int, y: int, ell: int) -> Fraction:
    """Fraction of the ell-subsets S with X inside S and Y inside the complement."""
    return Fraction(comb(k - x - y, ell - x), comb(k, ell))


def nominal_density(k: int, x: int, y: int) -> Fraction:
    """C(2z, z) / C(k, x + z) with z = ceil((k - x - y)/2); the true density when k-x-y is even."""
    z = split_size(k, x, y) - x
    return Fraction(comb(2 * z, z), comb(k, x + z))


def lemma_size_bound(k: int, x: int, y: int) -> Decimal:
    """N = (C(k, x+z) / C(2z, z)) (1 + ln 4^k) + 1."""
    z = split_size(k, x, y) - x
    with localcontext() as ctx:
        ctx.prec = 50
        return Decimal(comb(k, x + z)) / Decimal(comb(2 * z, z)) * (1 + k * Decimal(4).ln()) + 1


def lemma_cost_bound(k: int, x: int, y: int) -> Decimal:
    """2 C(x+z, z) N."""
    z = split_size(k, x, y) - x
    with localcontext() as ctx:
        ctx.prec = 50
        return 2 * comb(x + z, z) * lemma_size_bound(k, x, y)


@dataclass
class BlockCover:
    k: int
    x: int
    y: int
    ell: int
    gamma: Fraction
    universe: int
    chosen: list[int]  # masks of the chosen S
    row_masks: list[int]
    col_masks: list[int]

    @property
    def size(self) -> int:
        return len(self.chosen)

    def rectangles(self) -> list[Rectangle]:
        rpos = {m: i for i, m in enumerate(self.row_masks)}
        cpos = {m: j for j, m in enumerate(self.col_masks)}
        out = []
        for s in self.chosen:
            rows = [rpos[m] for m in self.row_masks if m & ~s == 0]
            cols = [cpos[m] for m in self.col_masks if m & s == 0]
            out.append(Rectangle(tuple(rows), tuple(cols)))
        return out

    @property
    def cost(self) -> int:
        return self.size * (comb(self.ell, self.x) + comb(self.k - self.ell, self.y))

    def bound(self) -> Fraction:
        return greedy_bound(self.gamma, self.universe)

    def covering(self) -> Covering:
        return Covering(kneser_submatrix(self.k, self.x, self.y), tuple(self.rectangles()))


def disjointness_block_cover(k: int, x: int, y: int, ell: int | None = None) -> BlockCover:
    """Greedy covering of D^{x,y}_[k] by bipartition rectangles with |S| = ell.

    Requires y <= x; the caller transposes for x < y.  Bipartitions are
    scanned in lexicographic order of S and ties go to the first one.
    """
    if not (0 <= y <= x <= k):
        raise ValueError(f"need 0 <= y <= x <= k, got k={k}, x={x}, y={y}")
    rows = subsets_lex(k, x)
    cols = subsets_lex(k, y)
    if x + y > k:
        return BlockCover(k, x, y, x, Fraction(0), 0, [], rows, cols)
    if ell is None:
        ell = split_size(k, x, y)
    if not x <= ell <= k - y:
        raise ValueError(f"need x <= ell <= k - y, got ell={ell}")
    full = (1 << k) - 1
    elems = {}
    for X in rows:
        rest = full & ~X
        for Y in subsets_of(rest, y):
            elems[(X, Y)] = len(elems)
    families = subsets_lex(k, ell)
    sets = []
    for S in families:
        comp = full & ~S
        xs = list(subsets_of(S, x))
        ys = list(subsets_of(comp, y))
        sets.append(tuple(elems[(X, Y)] for X in xs for Y in ys))
    inst = SetCoverInstance(len(elems), tuple(sets))
    picks = greedy_cover(inst)
    return BlockCover(k, x, y, ell, block_density(k, x, y, ell), len(elems), [families[p] for p in picks], rows, cols)


def subsets_of(mask: int, size: int) -> list[int]:
    """The size-subsets of mask, in lexicographic order of member lists."""
    elems = list(bits(mask))
    return [mask_of(c) for c in combinations(elems, size)]


def disjointness_full_cover(k: int) -> tuple[Covering, list[BlockCover]]:
    """Union of the lifted block coverings over all (x, y) with x + y <= k.

    Row/column i of D_{2^k} is the subset with mask i; blocks with x < y are
    covered as D^{y,x} and transposed.
    """
    if k > MAX_FULL_COVER_K:
        raise ValueError(f"disjointness_full_cover supports k <= {MAX_FULL_COVER_K}")
    host = disjointness(k)
    rects = []
    blocks = []
    for x in range(k + 1):
        for y in range(k + 1 - x):
            a, b = max(x, y), min(x, y)
            bc = disjointness_block_cover(k, a, b)
            blocks.append(bc)
            full = (1 << k) - 1
            for s in bc.chosen:
                comp = full & ~s
                R = mask_of(subsets_of(s, a))
                C = mask_of(subsets_of(comp, b))
                r = Rectangle.from_masks(R, C)
                rects.append(r if x >= y else r.transpose())
    return Covering(host, tuple(rects)), blocks


def full_cover_cost(k: int) -> int:
    cov, _ = disjointness_full_cover(k)
    return covering_cost(cov)


# -- optimal split analysis ----------------------------------------------------


def mu(k: int, x: int, y: int, ell: int) -> Fraction:
    """1/C(ell, x) + 1/C(k - ell, y): cost per covered entry of an ell-bipartition rectangle."""
    if not (0 <= x <= ell <= k - y) or y < 0:
        raise ValueError(f"need x <= ell <= k - y, got k={k}, x={x}, y={y}, ell={ell}")
    return Fraction(1, comb(ell, x)) + Fraction(1, comb(k - ell, y))


def ell_star(k: int, x: int, y: int) -> int:
    if x + y > k or x < 0 or y < 0:
        raise ValueError(f"no ell with x <= ell <= k - y for k={k}, x={x}, y={y}")
    return min(range(x, k - y + 1), key=lambda l: (mu(k, x, y, l), l))


def mu_lower_bound(k: int, x: int, y: int) -> Fraction:
    """mu* C(k, x) C(k-x, y): value of the uniform dual assignment."""
    return mu(k, x, y, ell_star(k, x, y)) * comb(k, x) * comb(k - x, y)


def eta_covering(k: int, x: int, y: int, ell: int) -> FractionalCovering:
    """All ell-bipartition rectangles, each with weight 1/C(k-x-y, ell-x)."""
    if x + y > k or not x <= ell <= k - y:
        raise ValueError(f"need x + y <= k and x <= ell <= k - y, got k={k}, x={x}, y={y}, ell={ell}")
    host = kneser_submatrix(k, x, y)
    rpos = {m: i for i, m in enumerate(subsets_lex(k, x))}
    cpos = {m: j for j, m in enumerate(subsets_lex(k, y))}
    w = Fraction(1, comb(k - x - y, ell - x))
    full = (1 << k) - 1
    items = []
    for S in subsets_lex(k, ell):
        rows = tuple(rpos[m] for m in subsets_of(S, x))
        cols = tuple(cpos[m] for m in subsets_of(full & ~S, y))
        items.append((Rectangle(rows, cols), w))
    return FractionalCovering(host, tuple(items))


def eta_cost(k: int, x: int, y: int, ell: int) -> Fraction:
    return Fraction((comb(ell, x) + comb(k - ell, y)) * comb(k, ell), comb(k - x - y, ell - x))


def trinomial_identity_check(k: int, x: int, y: int, ell: int) -> bool:
    lhs = comb(k, x) * comb(k - x, y) * comb(k - x - y, ell - x)
    rhs = comb(k, ell) * comb(ell, x) * comb(k - ell, y)
    return lhs == rhs


def binary_entropy(a: float) -> float:
    if a <= 0 or a >= 1:
        return 0.0
    return -a * math.log2(a) - (1 - a) * math.log2(1 - a)


def entropy_exponent(tol: float = 1e-10) -> tuple[float, float]:
    """Maximise H(a) + 1 - 3a over (0, 1/2) by golden-section search."""

    def g(a):
        return binary_entropy(a) + 1 - 3 * a

    lo, hi = 0.0, 0.5
    inv = (math.sqrt(5) - 1) / 2
    c, d = hi - inv * (hi - lo), lo + inv * (hi - lo)
    gc, gd = g(c), g(d)
    while hi - lo > tol:
        if gc > gd:
            hi, d, gd = d, c, gc
            c = hi - inv * (hi - lo)
            gc = g(c)
        else:
            lo, c, gc = c, d, gd
            d = lo + inv * (hi - lo)
            gd = g(d)
    a = (lo + hi) / 2
    return a, g(a)


def kneser_d(m: int, k: int) -> Fraction:
    """k!/(m! (k/2-m)! (k/2)!) over C(k-2m, k/2-m)."""
    if k % 2:
        raise ValueError(f"k must be even, got {k}")
    h = k // 2
    if not 0 <= m <= h:
        raise ValueError(f"need 0 <= m <= k/2, got m={m}")
    multi = factorial(k) // (factorial(m) * factorial(h - m) * factorial(h))
    return Fraction(multi, comb(k - 2 * m, h - m))


# -- report --------------------------------------------------------------------

REPORT_COLUMNS = ["k", "x", "y", "ell", "gamma", "greedy_size", "greedy_bound", "block_cost", "f_value", "mu_star", "eta_cost"]


def _q(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def block_report_rows(k: int, blocks: Sequence[tuple[int, int]] | None = None) -> list[dict]:
    if blocks is None:
        blocks = [(x, y) for x in range(k + 1) for y in range(x + 1) if x + y <= k]
    out = []
    for x, y in blocks:
        bc = disjointness_block_cover(k, x, y)
        ls = ell_star(k, x, y)
        out.append(
            {
                "k": k,
                "x": x,
                "y": y,
                "ell": bc.ell,
                "gamma": _q(bc.gamma),
                "greedy_size": bc.size,
                "greedy_bound": _q(bc.bound()),
                "block_cost": bc.cost,
                "f_value": _q(f_value(k, x, y)) if (k - x - y) % 2 == 0 else "",
                "mu_star": _q(mu(k, x, y, ls)),
                "eta_cost": _q(eta_cost(k, x, y, ls)),
            }
        )
    return out


def format_report_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def greedy_rectangle_cover(A: BooleanMatrix, weighted: bool = True) -> Covering:
    """Greedy set cover over the maximal rectangles of A.

    Weighted picks maximise newly covered entries per unit of |R|+|C|.
    Afterwards each rectangle is trimmed to the rows and columns that
    still cover something no other chosen rectangle covers.
    """
    from .covers import enumerate_maximal_rectangles

    rects = enumerate_maximal_rectangles(A)
    cells = {e: t for t, e in enumerate(A.ones())}
    sets = tuple(tuple(cells[c] for c in r.cells()) for r in rects)
    weights = tuple(Fraction(r.cost) for r in rects) if weighted else None
    picks = greedy_cover(SetCoverInstance(len(cells), sets, weights))
    chosen = [rects[p] for p in picks]
    if not weighted:
        return Covering(A, tuple(sorted(chosen, key=Rectangle.sort_key)))
    # trim in order, always against the current (possibly trimmed) versions of the others
    cur: list[Rectangle | None] = list(chosen)
    for t, r in enumerate(cur):
        others = [0] * A.m
        for s, q in enumerate(cur):
            if s != t and q is not None:
                for i in q.rows:
                    others[i] |= q.col_mask
        rows = [i for i in r.rows if r.col_mask & ~others[i]]
        if not rows:
            cur[t] = None
            continue
        cols = [j for j in r.cols if any(not (others[i] >> j) & 1 for i in rows)]
        cur[t] = Rectangle(tuple(rows), tuple(cols))
    out = [q for q in cur if q is not None]
    return Covering(A, tuple(sorted(out, key=Rectangle.sort_key)))
