"""Finite languages of two-letter words and union-of-products expressions.

A language L of words a_i a_j is identified with its characteristic
matrix (rows = first letter, columns = second letter).  An expression
R_1 C_1 + ... + R_t C_t, each R and C a sum of letters, denotes the
union of the products; its alphabetic length is sum |R| + |C|, which is
the cost of the corresponding rectangle covering.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boolmat import BooleanMatrix, FormatError, triangular
from .covers import Covering, Rectangle, validate_covering
from .exact import DEFAULT_NODE_BUDGET, exact_or2
from .greedy import greedy_rectangle_cover
from .network import triangular_chain


@dataclass(frozen=True)
class TwoLetterLanguage:
    sigma_size: int
    delta_size: int
    words: frozenset[tuple[int, int]]

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(self.words))
        if not self.words:
            raise ValueError("language must be nonempty")
        if self.sigma_size < 1 or self.delta_size < 1:
            raise ValueError("alphabet sizes must be positive")
        for i, j in self.words:
            if not (0 <= i < self.sigma_size and 0 <= j < self.delta_size):
                raise ValueError(f"word a{i} a{j} outside the alphabets")

    @classmethod
    def from_matrix(cls, A: BooleanMatrix) -> "TwoLetterLanguage":
        return cls(A.m, A.n, frozenset(A.ones()))


def language_Ln(n: int) -> TwoLetterLanguage:
    """L_n = { a_i a_j : 0 <= i < j < n }."""
    if n < 2:
        raise ValueError("L_n needs n >= 2")
    return TwoLetterLanguage(n, n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def characteristic_matrix(L: TwoLetterLanguage) -> BooleanMatrix:
    rows = [0] * L.sigma_size
    for i, j in L.words:
        rows[i] |= 1 << j
    return BooleanMatrix(L.sigma_size, L.delta_size, tuple(rows))


def _sum(letters) -> str:
    if len(letters) == 1:
        return f"a{letters[0]}"
    return "(" + "+".join(f"a{t}" for t in letters) + ")"


@dataclass(frozen=True)
class Regex2:
    terms: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def __post_init__(self):
        terms = []
        for r, c in self.terms:
            if not r or not c:
                raise ValueError("every product needs letters on both sides")
            terms.append((tuple(sorted(set(r))), tuple(sorted(set(c)))))
        terms.sort(key=lambda t: (t[0][0], t[1][0], t))
        object.__setattr__(self, "terms", tuple(terms))

    def alphabetic_length(self) -> int:
        return sum(len(r) + len(c) for r, c in self.terms)

    def language(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for r, c in self.terms for i in r for j in c)

    def render(self) -> str:
        parts = []
        for r, c in self.terms:
            left, right = _sum(r), _sum(c)
            sep = " " if left[-1].isdigit() and right[0] == "a" else ""
            parts.append(left + sep + right)
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.render()


def covering_to_regex(c: Covering) -> Regex2:
    validate_covering(c)
    return Regex2(tuple((r.rows, r.cols) for r in c.rectangles))


def regex_to_covering(rx: Regex2, host: BooleanMatrix) -> Covering:
    return Covering(host, tuple(Rectangle(r, c) for r, c in rx.terms))


@dataclass(frozen=True)
class RegexLength:
    length: int
    exact: bool

    def __iter__(self):
        return iter((self.length, self.exact))


def optimal_regex_length(L: TwoLetterLanguage, exact_budget: bool = True, budget: int = DEFAULT_NODE_BUDGET) -> RegexLength:
    """Smallest alphabetic length when the exact search finishes, else a greedy upper bound."""
    A = characteristic_matrix(L)
    if exact_budget:
        res = exact_or2(A, budget=budget)
        if res.optimal:
            return RegexLength(res.cost, True)
        return RegexLength(res.cost, False)
    cov = greedy_rectangle_cover(A)
    return RegexLength(sum(r.cost for r in cov.rectangles), False)


def optimal_regex(L: TwoLetterLanguage, budget: int = DEFAULT_NODE_BUDGET) -> tuple[Regex2, bool]:
    res = exact_or2(characteristic_matrix(L), budget=budget)
    return covering_to_regex(res.covering), res.optimal


def divide_and_conquer_regex(n: int) -> Regex2:
    """L_{A,B} = L_{A,C} + L_{C+1,B} + (a_A+..+a_C)(a_{C+1}+..+a_B), C = floor((A+B)/2)."""
    if n < 2:
        raise ValueError("divide_and_conquer_regex needs n >= 2")
    terms = []
    stack = [(0, n - 1)]
    while stack:
        a, b = stack.pop()
        if a >= b:
            continue
        c = (a + b) // 2
        terms.append((tuple(range(a, c + 1)), tuple(range(c + 1, b + 1))))
        stack.append((a, c))
        stack.append((c + 1, b))
    return Regex2(tuple(terms))


@dataclass(frozen=True)
class NfaSizes:
    eps_free_size: int
    eps_free_exact: bool
    eps_upper: int

    def __iter__(self):
        return iter((self.eps_free_size, self.eps_upper))


def nfa_sizes(L: TwoLetterLanguage, exact_budget: bool = True, budget: int = DEFAULT_NODE_BUDGET) -> NfaSizes:
    """epsilon-free NFA size (= optimal alphabetic length) and the OR + m + n upper bound
    for epsilon-NFAs, using the best network known here for the OR term."""
    length, exact = optimal_regex_length(L, exact_budget, budget)
    best_or = length
    A = characteristic_matrix(L)
    if A.m == A.n and A == triangular(A.n) and A.n >= 2:
        best_or = min(best_or, triangular_chain(A.n).size)
    return NfaSizes(length, exact, best_or + L.sigma_size + L.delta_size)


# -- .l2 text format ----------------------------------------------------------


def format_l2(L: TwoLetterLanguage) -> str:
    lines = [f"{L.sigma_size} {L.delta_size}"]
    lines += [f"{i} {j}" for i, j in sorted(L.words)]
    return "\n".join(lines) + "\n"


def parse_l2(text: str) -> TwoLetterLanguage:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty input", 1)
    head = lines[0].split()
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise FormatError(f"header must be 'm n', got {lines[0]!r}", 1)
    m, n = map(int, head)
    words = set()
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise FormatError(f"expected '<i> <j>', got {line!r}", k)
        i, j = map(int, parts)
        if i >= m or j >= n:
            raise FormatError(f"word a{i} a{j} outside {m}x{n}", k)
        words.add((i, j))
    if not words:
        raise FormatError("language is empty", len(lines))
    return TwoLetterLanguage(m, n, frozenset(words))
