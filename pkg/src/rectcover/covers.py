"""Rectangles, integral and fractional coverings, partitions.

A rectangle ``(R, C)`` of a host matrix is a pair of nonempty index sets
with every entry of ``R x C`` equal to 1; it costs ``|R| + |C|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .boolmat import BooleanMatrix, FormatError, bits, mask_of

MAX_ENUM_ROWS = 24


class CoveringError(ValueError):
    """A covering fails validation; ``entry`` is the first offending (i, j) in row-major order."""

    def __init__(self, message: str, entry: tuple[int, int] | None = None, total=None):
        self.entry = entry
        self.total = total
        super().__init__(message)


class BudgetExceeded(RuntimeError):
    """An enumeration or search exceeded its configured budget."""


@dataclass(frozen=True)
class Rectangle:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        if not self.rows or not self.cols:
            raise ValueError("rectangle needs nonempty row and column sets")
        object.__setattr__(self, "rows", tuple(sorted(set(self.rows))))
        object.__setattr__(self, "cols", tuple(sorted(set(self.cols))))
        if self.rows[0] < 0 or self.cols[0] < 0:
            raise ValueError("indices must be nonnegative")

    @classmethod
    def from_masks(cls, row_mask: int, col_mask: int) -> "Rectangle":
        return cls(tuple(bits(row_mask)), tuple(bits(col_mask)))

    @cached_property
    def row_mask(self) -> int:
        return mask_of(self.rows)

    @cached_property
    def col_mask(self) -> int:
        return mask_of(self.cols)

    @property
    def cost(self) -> int:
        return len(self.rows) + len(self.cols)

    def transpose(self) -> "Rectangle":
        return Rectangle(self.cols, self.rows)

    def cells(self) -> Iterator[tuple[int, int]]:
        for i in self.rows:
            for j in self.cols:
                yield (i, j)

    def __contains__(self, entry) -> bool:
        i, j = entry
        return (self.row_mask >> i) & 1 == 1 and (self.col_mask >> j) & 1 == 1

    def sort_key(self):
        return (self.rows, self.cols)


def rectangle_cost(r: Rectangle) -> int:
    return len(r.rows) + len(r.cols)


def is_rectangle_of(A: BooleanMatrix, r: Rectangle) -> bool:
    if r.rows[-1] >= A.m or r.cols[-1] >= A.n:
        return False
    return all(A.rows[i] & r.col_mask == r.col_mask for i in r.rows)


def _first_zero(A: BooleanMatrix, r: Rectangle) -> tuple[int, int] | None:
    for i in r.rows:
        if i >= A.m:
            return (i, r.cols[0])
        missing = r.col_mask & ~A.rows[i]
        if missing:
            return (i, (missing & -missing).bit_length() - 1)
    return None


@dataclass(frozen=True)
class Covering:
    host: BooleanMatrix
    rectangles: tuple[Rectangle, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "rectangles", tuple(self.rectangles))

    @property
    def host_dims(self) -> tuple[int, int]:
        return (self.host.m, self.host.n)

    def __len__(self) -> int:
        return len(self.rectangles)

    def sorted(self) -> "Covering":
        return Covering(self.host, tuple(sorted(self.rectangles, key=Rectangle.sort_key)))


@dataclass(frozen=True)
class FractionalCovering:
    host: BooleanMatrix
    weighted: tuple[tuple[Rectangle, Fraction], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(
            self, "weighted", tuple((r, Fraction(w)) for r, w in self.weighted)
        )

    @property
    def host_dims(self) -> tuple[int, int]:
        return (self.host.m, self.host.n)


def coverage_counts(host: BooleanMatrix, rects: Iterable[Rectangle]) -> list[list[int]]:
    counts = [[0] * host.n for _ in range(host.m)]
    for r in rects:
        for i in r.rows:
            row = counts[i]
            for j in r.cols:
                row[j] += 1
    return counts


def validate_covering(c: Covering) -> None:
    """Raise CoveringError naming the first offending entry in row-major order."""
    A = c.host
    offenders = []
    for r in c.rectangles:
        bad = _first_zero(A, r) if r.cols[-1] < A.n else (r.rows[0], r.cols[-1])
        if bad is not None:
            offenders.append((bad, f"rectangle {r.rows}x{r.cols} contains 0-entry {bad}"))
    covered = [0] * A.m
    for r in c.rectangles:
        for i in r.rows:
            if i < A.m:
                covered[i] |= r.col_mask
    for i, row in enumerate(A.rows):
        miss = row & ~covered[i]
        if miss:
            e = (i, (miss & -miss).bit_length() - 1)
            offenders.append((e, f"1-entry {e} is not covered"))
            break
    if offenders:
        entry, msg = min(offenders)
        raise CoveringError(msg, entry)


def covering_cost(c: Covering) -> int:
    validate_covering(c)
    return sum(rectangle_cost(r) for r in c.rectangles)


def is_valid_covering(c: Covering) -> bool:
    try:
        validate_covering(c)
    except CoveringError:
        return False
    return True


def is_partition(c: Covering) -> bool:
    """True iff every 1-entry is covered exactly once."""
    validate_covering(c)
    seen = [0] * c.host.m
    for r in c.rectangles:
        for i in r.rows:
            if seen[i] & r.col_mask:
                return False
            seen[i] |= r.col_mask
    return True


def as_fractional(c: Covering) -> FractionalCovering:
    return FractionalCovering(c.host, tuple((r, Fraction(1)) for r in c.rectangles))


def coverage_totals(f: FractionalCovering) -> dict[tuple[int, int], Fraction]:
    totals: dict[tuple[int, int], Fraction] = {}
    for r, w in f.weighted:
        for cell in r.cells():
            totals[cell] = totals.get(cell, Fraction(0)) + w
    return totals


def validate_fractional(f: FractionalCovering) -> None:
    A = f.host
    for r, w in f.weighted:
        if not 0 <= w <= 1:
            raise CoveringError(f"weight {w} of rectangle {r.rows}x{r.cols} outside [0, 1]")
        bad = _first_zero(A, r) if r.cols[-1] < A.n else (r.rows[0], r.cols[-1])
        if bad is not None:
            raise CoveringError(f"rectangle {r.rows}x{r.cols} contains 0-entry {bad}", bad)
    totals = coverage_totals(f)
    for cell in A.ones():
        got = totals.get(cell, Fraction(0))
        if got < 1:
            raise CoveringError(f"coverage deficit at {cell}: total {got} < 1", cell, got)


def fractional_cost(f: FractionalCovering) -> Fraction:
    validate_fractional(f)
    return sum((w * rectangle_cost(r) for r, w in f.weighted), Fraction(0))


# -- rectangle enumeration ----------------------------------------------------


def enumerate_maximal_rectangles(
    A: BooleanMatrix, max_rows: int = MAX_ENUM_ROWS, max_count: int | None = None
) -> list[Rectangle]:
    """All inclusion-maximal 1-rectangles, sorted by (rows, cols).

    Closed column sets are exactly the nonempty intersections of row supports;
    each one determines its maximal row set.
    """
    if A.m > max_rows:
        raise BudgetExceeded(f"{A.m} rows exceeds the enumeration budget of {max_rows}")
    closed: set[int] = set()
    for r in A.rows:
        if not r:
            continue
        fresh = {r}
        for c in closed:
            meet = c & r
            if meet:
                fresh.add(meet)
        closed |= fresh
        if max_count is not None and len(closed) > max_count:
            raise BudgetExceeded(f"more than {max_count} maximal rectangles")
    if not closed:
        raise ValueError("matrix has no 1-entries")
    out = []
    for cmask in closed:
        rmask = mask_of(i for i, r in enumerate(A.rows) if r & cmask == cmask)
        out.append(Rectangle.from_masks(rmask, cmask))
    out.sort(key=Rectangle.sort_key)
    return out


def iter_rectangles(A: BooleanMatrix, max_rows: int = 16) -> Iterator[Rectangle]:
    """Every 1-rectangle of A (exponential; for small hosts only)."""
    if A.m > max_rows:
        raise BudgetExceeded(f"{A.m} rows exceeds the enumeration budget of {max_rows}")
    full = (1 << A.n) - 1

    def rec(start: int, rmask: int, common: int):
        if rmask:
            sub = common
            while sub:
                yield Rectangle.from_masks(rmask, sub)
                sub = (sub - 1) & common
        for i in range(start, A.m):
            nxt = common & A.rows[i]
            if nxt:
                yield from rec(i + 1, rmask | (1 << i), nxt)

    yield from rec(0, 0, full)


# -- .cov text format ---------------------------------------------------------


def _fmt_idx(xs: Sequence[int]) -> str:
    return ",".join(str(x) for x in xs)


def format_cov(c: Covering | FractionalCovering) -> str:
    if isinstance(c, Covering):
        items = [(r, Fraction(1)) for r in c.rectangles]
    else:
        items = list(c.weighted)
    lines = [f"{c.host.m} {c.host.n} {len(items)}"]
    for r, w in items:
        line = f"R {_fmt_idx(r.rows)} C {_fmt_idx(r.cols)}"
        if w != 1:
            line += f" W {w.numerator}/{w.denominator}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _parse_idx(tok: str, lineno: int) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in tok.split(","))
    except ValueError:
        raise FormatError(f"bad index list {tok!r}", lineno) from None
    if any(v < 0 for v in vals) or list(vals) != sorted(set(vals)):
        raise FormatError(f"indices must be sorted, distinct and nonnegative: {tok!r}", lineno)
    return vals


def parse_cov(text: str, host: BooleanMatrix) -> Covering | FractionalCovering:
    """Parse a .cov file; returns a FractionalCovering iff some line carries a weight."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty input", 1)
    head = lines[0].split()
    if len(head) != 3 or not all(h.isdigit() for h in head):
        raise FormatError(f"header must be 'm n t', got {lines[0]!r}", 1)
    m, n, t = map(int, head)
    if (m, n) != (host.m, host.n):
        raise FormatError(f"covering is for {m}x{n}, host is {host.m}x{host.n}", 1)
    if len(lines) - 1 != t:
        raise FormatError(f"expected {t} rectangles, found {len(lines) - 1}", len(lines))
    items = []
    fractional = False
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) not in (4, 6) or parts[0] != "R" or parts[2] != "C":
            raise FormatError(f"expected 'R <rows> C <cols> [W p/q]', got {line!r}", k)
        rows, cols = _parse_idx(parts[1], k), _parse_idx(parts[3], k)
        if rows[-1] >= m or cols[-1] >= n:
            raise FormatError("index out of range", k)
        w = Fraction(1)
        if len(parts) == 6:
            if parts[4] != "W" or "/" not in parts[5]:
                raise FormatError(f"weight must be 'W p/q', got {' '.join(parts[4:])!r}", k)
            try:
                p, q = parts[5].split("/")
                w = Fraction(int(p), int(q))
            except (ValueError, ZeroDivisionError):
                raise FormatError(f"bad weight {parts[5]!r}", k) from None
            fractional = True
        items.append((Rectangle(rows, cols), w))
    if fractional:
        return FractionalCovering(host, tuple(items))
    return Covering(host, tuple(r for r, _ in items))
