"""Dense Boolean matrices and the generators for the matrix families.

A matrix is stored row-major as a tuple of Python ints: bit ``j`` of
``rows[i]`` is entry ``(i, j)``.  Indices are 0-based.  Subset families
(Kneser blocks) use the ground set ``{1, ..., k}``; element ``t`` maps to
bit ``t - 1`` of a mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

MAX_CELLS = 1 << 28
MAX_DISJOINTNESS_K = 20


class MatrixSizeError(ValueError):
    """Requested matrix exceeds the configured memory budget."""


class FormatError(ValueError):
    """Malformed text input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _check_cells(m: int, n: int, max_cells: int | None) -> None:
    budget = MAX_CELLS if max_cells is None else max_cells
    if m * n > budget:
        raise MatrixSizeError(f"{m}x{n} matrix exceeds budget of {budget} cells")


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


@dataclass(frozen=True)
class BooleanMatrix:
    m: int
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"matrix dimensions must be positive, got {self.m}x{self.n}")
        if len(self.rows) != self.m:
            raise ValueError(f"expected {self.m} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for i, r in enumerate(self.rows):
            if r < 0 or r & ~full:
                raise ValueError(f"row {i} has bits outside 0..{self.n - 1}")

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> "BooleanMatrix":
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and one column")
        n = len(data[0])
        rows = []
        for i, row in enumerate(data):
            if len(row) != n:
                raise ValueError(f"ragged row {i}: expected {n} entries, got {len(row)}")
            mask = 0
            for j, v in enumerate(row):
                if v not in (0, 1, True, False):
                    raise ValueError(f"entry ({i},{j}) is {v!r}, not 0/1")
                if v:
                    mask |= 1 << j
            rows.append(mask)
        return cls(len(rows), n, tuple(rows))

    @classmethod
    def from_predicate(cls, m: int, n: int, pred, max_cells: int | None = None) -> "BooleanMatrix":
        _check_cells(m, n, max_cells)
        return cls(m, n, tuple(mask_of(j for j in range(n) if pred(i, j)) for i in range(m)))

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.m and 0 <= j < self.n):
            raise IndexError(f"({i},{j}) outside {self.m}x{self.n}")
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.n)

    def ones_count(self) -> int:
        return sum(popcount(r) for r in self.rows)

    def ones(self) -> Iterator[tuple[int, int]]:
        """1-entries in row-major order."""
        for i, r in enumerate(self.rows):
            for j in bits(r):
                yield (i, j)

    def columns(self) -> tuple[int, ...]:
        """Column masks (bit ``i`` of ``columns()[j]`` is entry ``(i, j)``)."""
        cols = [0] * self.n
        for i, r in enumerate(self.rows):
            for j in bits(r):
                cols[j] |= 1 << i
        return tuple(cols)

    def transpose(self) -> "BooleanMatrix":
        return BooleanMatrix(self.n, self.m, self.columns())

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "BooleanMatrix":
        """Matrix whose entry (row_perm[i], col_perm[j]) equals self's entry (i, j)."""
        new_rows = [0] * self.m
        for i, r in enumerate(self.rows):
            new_rows[row_perm[i]] = mask_of(col_perm[j] for j in bits(r))
        return BooleanMatrix(self.m, self.n, tuple(new_rows))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "BooleanMatrix":
        return BooleanMatrix(
            len(row_idx),
            len(col_idx),
            tuple(mask_of(t for t, j in enumerate(col_idx) if (self.rows[i] >> j) & 1) for i in row_idx),
        )

    def is_triangular(self) -> bool:
        """True iff this is exactly the strictly upper triangular T_n."""
        if self.m != self.n:
            return False
        full = (1 << self.n) - 1
        return all(r == full & ~((1 << (i + 1)) - 1) for i, r in enumerate(self.rows))

    def __str__(self) -> str:
        return "\n".join("".join("1" if (r >> j) & 1 else "0" for j in range(self.n)) for r in self.rows)


# -- generators ---------------------------------------------------------------


def triangular(n: int) -> BooleanMatrix:
    """T_n: entry (i, j) is 1 iff i < j."""
    if n < 1:
        raise ValueError("triangular(n) needs n >= 1")
    _check_cells(n, n, None)
    full = (1 << n) - 1
    return BooleanMatrix(n, n, tuple(full & ~((1 << (i + 1)) - 1) for i in range(n)))


def all_ones(m: int, n: int) -> BooleanMatrix:
    if m < 1 or n < 1:
        raise ValueError("all_ones needs m, n >= 1")
    _check_cells(m, n, None)
    return BooleanMatrix(m, n, ((1 << n) - 1,) * m)


def identity(n: int) -> BooleanMatrix:
    if n < 1:
        raise ValueError("identity needs n >= 1")
    return BooleanMatrix(n, n, tuple(1 << i for i in range(n)))


def disjointness(k: int, max_cells: int | None = None) -> BooleanMatrix:
    """D_{2^k}: entry (i, j) is 1 iff i & j == 0."""
    if k < 0:
        raise ValueError("disjointness needs k >= 0")
    if k > MAX_DISJOINTNESS_K:
        raise MatrixSizeError(f"disjointness(k) supports k <= {MAX_DISJOINTNESS_K}, got {k}")
    size = 1 << k
    _check_cells(size, size, max_cells)
    # D_{2n} = (D_n D_n; D_n 0); bit j of row i is set iff i & j == 0
    rows = [1]
    for t in range(k):
        n = 1 << t
        rows = [r | (r << n) for r in rows] + rows
    return BooleanMatrix(size, size, tuple(rows))


def subsets_lex(k: int, x: int) -> list[int]:
    """Masks of the x-subsets of {1..k}, in lexicographic order of sorted member lists."""
    if not 0 <= x <= k:
        raise ValueError(f"need 0 <= x <= k, got x={x}, k={k}")
    return [mask_of(t - 1 for t in c) for c in combinations(range(1, k + 1), x)]


def kneser_submatrix(k: int, x: int, y: int, max_cells: int | None = None) -> BooleanMatrix:
    """D^{x,y}_[k]: x-subsets against y-subsets of {1..k}, 1 iff disjoint."""
    if not (0 <= x <= k and 0 <= y <= k):
        raise ValueError(f"need 0 <= x, y <= k, got k={k}, x={x}, y={y}")
    _check_cells(comb(k, x), comb(k, y), max_cells)
    rows = subsets_lex(k, x)
    cols = subsets_lex(k, y)
    return BooleanMatrix(
        len(rows), len(cols), tuple(mask_of(j for j, c in enumerate(cols) if not r & c) for r in rows)
    )


def kronecker(K: BooleanMatrix, M: BooleanMatrix, max_cells: int | None = None) -> BooleanMatrix:
    """K (x) M with row (i1, i2) -> i1*m2 + i2 and column (j1, j2) -> j1*n2 + j2."""
    m, n = K.m * M.m, K.n * M.n
    _check_cells(m, n, max_cells)
    rows = []
    for r1 in K.rows:
        for r2 in M.rows:
            rows.append(sum(r2 << (j1 * M.n) for j1 in bits(r1)))
    return BooleanMatrix(m, n, tuple(rows))


def triangular_or2(n: int) -> int:
    """s(n) = n(floor(log2 n) + 2) - 2^(floor(log2 n) + 1), the OR2 value of T_n."""
    if n < 1:
        raise ValueError("s(n) is defined for n >= 1")
    f = n.bit_length() - 1
    return n * (f + 2) - (1 << (f + 1))


@dataclass(frozen=True)
class SubsetIndex:
    """A subset of {1..k}; ``members`` sorted ascending."""

    k: int
    members: tuple[int, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.members, self.members[1:])):
            raise ValueError("members must be strictly increasing")
        if self.members and not (1 <= self.members[0] and self.members[-1] <= self.k):
            raise ValueError(f"members must lie in 1..{self.k}")

    @classmethod
    def from_mask(cls, k: int, mask: int) -> "SubsetIndex":
        return cls(k, tuple(b + 1 for b in bits(mask)))

    @property
    def mask(self) -> int:
        return mask_of(t - 1 for t in self.members)

    def complement(self) -> "SubsetIndex":
        return SubsetIndex.from_mask(self.k, ((1 << self.k) - 1) & ~self.mask)

    def position(self) -> int:
        """Rank among the |members|-subsets of {1..k} in lexicographic order."""
        x = len(self.members)
        rank, prev = 0, 0
        for idx, t in enumerate(self.members):
            for v in range(prev + 1, t):
                rank += comb(self.k - v, x - idx - 1)
            prev = t
        return rank


# -- .bm text format ----------------------------------------------------------


def format_bm(A: BooleanMatrix) -> str:
    return f"{A.m} {A.n}\n" + "".join(
        "".join("1" if (r >> j) & 1 else "0" for j in range(A.n)) + "\n" for r in A.rows
    )


def parse_bm(text: str) -> BooleanMatrix:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty input", 1)
    head = lines[0].split(" ")
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise FormatError(f"header must be 'm n', got {lines[0]!r}", 1)
    m, n = int(head[0]), int(head[1])
    if m < 1 or n < 1:
        raise FormatError("dimensions must be positive", 1)
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} matrix rows, found {len(lines) - 1}", len(lines))
    rows = []
    for i, line in enumerate(lines[1:]):
        if len(line) != n or line.strip("01"):
            raise FormatError(f"row must be exactly {n} characters from {{0,1}}", i + 2)
        rows.append(int(line[::-1], 2))
    return BooleanMatrix(m, n, tuple(rows))


def read_bm(path) -> BooleanMatrix:
    with open(path, encoding="ascii") as fh:
        return parse_bm(fh.read())


def write_bm(A: BooleanMatrix, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_bm(A))
