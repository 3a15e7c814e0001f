"""The twelve acceptance criteria, one test each.

Every test records a one-line verdict; the lines are printed at the end of
the run (see ``pytest_terminal_summary`` in conftest.py) and also written
to stdout as each test finishes.
"""

import functools
import math
import random
import time
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb

from oracles import count_triples, s_recurrence
from rectcover.boolmat import BooleanMatrix, kneser_submatrix, kronecker, triangular
from rectcover.covers import covering_cost, fractional_cost, validate_covering
from rectcover.exact import exact_or2, verify_direct_product
from rectcover.greedy import (
    disjointness_block_cover,
    disjointness_full_cover,
    ell_star,
    entropy_exponent,
    eta_covering,
    lemma_cost_bound,
    mu,
    mu_lower_bound,
    nominal_density,
    trinomial_identity_check,
)
from rectcover.lp import cover_lp, DualCertificate, triangular_certificate, verify_certificate
from rectcover.network import covering_to_depth2, depth_profile, example_networks, express, matrix_B
from rectcover.regexlang import divide_and_conquer_regex, language_Ln, optimal_regex_length

VERDICTS: dict[int, str] = {}


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.time()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as e:
                line = f"criterion {number:2d} FAIL  {title}: {type(e).__name__}: {e}"
                VERDICTS[number] = line
                print(line)
                raise
            line = f"criterion {number:2d} PASS  {title} ({detail}; {time.time() - t0:.1f}s)"
            VERDICTS[number] = line
            print(line)

        return run

    return wrap


@criterion(1, "exact OR2(T_n) = s(n), n = 2..8, under 60 s")
def test_c01_triangular_exact():
    t0 = time.time()
    got = []
    for n in range(2, 9):
        res = exact_or2(triangular(n))
        assert res.optimal, f"search for T_{n} did not finish"
        validate_covering(res.covering)
        assert covering_cost(res.covering) == res.cost
        got.append(res.cost)
    elapsed = time.time() - t0
    want = [s_recurrence(n) for n in range(2, 9)]
    assert got == want == [2, 5, 8, 12, 16, 20, 24], got
    assert elapsed < 60, f"{elapsed:.1f}s"
    return f"values {got}"


@criterion(2, "weighted cover LP on T_n equals s(n), duals match, n = 2..8")
def test_c02_fractional_tightness():
    for n in range(2, 9):
        T = triangular(n)
        sol = cover_lp(T, weighted=True)
        assert sol.value == s_recurrence(n), (n, sol.value)
        assert fractional_cost(sol.covering) == sol.value
        cert = DualCertificate(n, n, {e: v for e, v in sol.duals.items() if v})
        chk = verify_certificate(T, cert, "triangular")
        assert chk.feasible and chk.value == sol.value, (n, chk)
    return "primal = dual = s(n) exactly"


@criterion(3, "triangular certificate feasible with value s(n), n = 2..18, n=18 under 5 min")
def test_c03_certificate():
    for n in range(2, 19):
        t0 = time.time()
        cert = triangular_certificate(n)
        chk = verify_certificate(triangular(n), cert, "triangular")
        assert chk.feasible, (n, chk.worst_slack, chk.witness)
        assert chk.value == s_recurrence(n), (n, chk.value)
        if n <= 8:
            # the general row-subset search agrees with the split-point oracle
            assert verify_certificate(triangular(n), cert, "general").worst_slack == chk.worst_slack
    assert time.time() - t0 < 300
    return "split-point oracle, all feasible"


def lemma_formula(gamma: Fraction, universe: int) -> Fraction:
    """ceil((1/gamma) ln+(gamma |U|)) + 1/gamma, evaluated as written (gamma may exceed 1)."""
    arg = gamma * universe
    head = 0
    if arg > 1:
        with localcontext() as ctx:
            ctx.prec = 60
            ln = (Decimal(arg.numerator) / Decimal(arg.denominator)).ln()
            head = math.ceil(ln * gamma.denominator / gamma.numerator)
    return head + 1 / gamma


@criterion(4, "greedy block size within the density bound, k <= 12")
def test_c04_greedy_lemma():
    runs = violations = 0
    for k in range(1, 13):
        for x in range(k + 1):
            for y in range(x + 1):
                if x + y > k:
                    continue
                bc = disjointness_block_cover(k, x, y)
                stated_ok = bc.size <= lemma_formula(nominal_density(k, x, y), bc.universe)
                # the density the cover actually has
                true_ok = bc.size <= lemma_formula(bc.gamma, bc.universe)
                runs += 1
                violations += (not stated_ok) + (not true_ok)
    assert violations == 0, f"{violations} violations"
    return f"{runs} blocks, 0 violations"


@criterion(5, "even-parity block cost <= 2 C(x+z,z) N, k <= 12")
def test_c05_cost_chain():
    checked = 0
    for k in range(1, 13):
        for x in range(k + 1):
            for y in range(x + 1):
                if x + y > k or (k - x - y) % 2:
                    continue
                bc = disjointness_block_cover(k, x, y)
                assert Decimal(bc.cost) <= lemma_cost_bound(k, x, y), (k, x, y, bc.cost)
                checked += 1
    return f"{checked} blocks"


@criterion(6, "trinomial identity, eta cost = mu bound, mu bound <= exact OR2 (k <= 6)")
def test_c06_optimal_split():
    identities = 0
    for k in range(0, 31):
        for x in range(k + 1):
            for y in range(k + 1 - x):
                for ell in range(x, k - y + 1):
                    assert trinomial_identity_check(k, x, y, ell), (k, x, y, ell)
                    if k <= 8:
                        lhs = comb(k, x) * comb(k - x, y) * comb(k - x - y, ell - x)
                        assert lhs == count_triples(k, x, y, ell)
                    identities += 1
    for k in range(1, 11):
        for x in range(k + 1):
            for y in range(k + 1 - x):
                ls = ell_star(k, x, y)
                f = eta_covering(k, x, y, ls)
                assert fractional_cost(f) == mu(k, x, y, ls) * comb(k, x) * comb(k - x, y), (k, x, y)
    rows = []
    for k in range(1, 7):
        for x in range(k + 1):
            for y in range(x + 1):
                if x + y > k:
                    continue
                A = kneser_submatrix(k, x, y)
                # the (y, x) block is the transpose, with the same mu bound and OR2
                assert kneser_submatrix(k, y, x) == A.transpose()
                assert mu_lower_bound(k, y, x) == mu_lower_bound(k, x, y)
                res = exact_or2(A, budget=20000, fallback=True)
                validate_covering(res.covering)
                assert res.optimal, (k, x, y, res.cost, res.lower_bound)
                lb = mu_lower_bound(k, x, y)
                assert lb <= res.cost, (k, x, y, lb, res.cost)
                rows.append((k, x, y, lb, res.cost, res.solver))
    milp = sum(1 for r in rows if r[5] == "milp")
    return f"{identities} identities, {len(rows)} blocks sandwiched ({milp} settled by MILP)"


@criterion(7, "entropy optimum log2(9/4) at 1/9")
def test_c07_entropy():
    a, v = entropy_exponent()
    assert abs(v - math.log2(9 / 4)) <= 1e-9, v
    assert abs(a - 1 / 9) <= 1e-6, a
    return f"alpha={a:.9f}, value={v:.12f}"


@criterion(8, "B: networks of size 19 and 20, depths (3,3) and (2,2), OR2(B) = 20")
def test_c08_example_networks():
    n19, n20, _ = example_networks()
    B = matrix_B()
    assert express(n19) == B and express(n20) == B
    assert (n19.size, n20.size) == (19, 20)
    assert depth_profile(n19) == (3, 3) and depth_profile(n20) == (2, 2)
    res = exact_or2(B)
    assert res.optimal and res.cost == 20
    return "all match"


@criterion(9, "family(n) expresses M_n with 4n+1 edges, n = 1..8")
def test_c09_family():
    _, _, family = example_networks()
    upper = BooleanMatrix.from_lists([[1, 1], [0, 1]])
    for n in range(1, 9):
        net = family(n)
        J = BooleanMatrix(n, n, tuple([(1 << n) - 1] * n))
        assert express(net) == kronecker(upper, J), n
        assert net.size == 4 * n + 1, (n, net.size)
    return "n = 1..8"


@criterion(10, "direct-product chain on >= 20 random (K, M) pairs")
def test_c10_direct_product():
    rng = random.Random(20240611)

    def rand_matrix():
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        while True:
            rows = tuple(rng.getrandbits(n) for _ in range(m))
            if any(rows):
                return BooleanMatrix(m, n, rows)

    pairs = violations = 0
    while pairs < 24:
        K, M = rand_matrix(), rand_matrix()
        Q = kronecker(K, M)
        res = exact_or2(Q)
        assert res.optimal
        net = covering_to_depth2(res.covering)
        rep = verify_direct_product(K, M, net)
        if not all(e.weight <= 1 for e in rep.edge_rects):
            violations += 1
        if not all(s.expresses_M for s in rep.subnetworks):
            violations += 1
        if not rep.total_edges >= rep.weight_sum >= rep.chain_bound:
            violations += 1
        violations += len(rep.violations)
        pairs += 1
    assert violations == 0, f"{violations} violations"
    return f"{pairs} pairs, 0 violations"


@criterion(11, "divide-and-conquer regex has length s(n) and denotes L_n (n <= 64); optimum for L_4 is 8")
def test_c11_regex():
    for n in range(2, 65):
        rx = divide_and_conquer_regex(n)
        assert rx.alphabetic_length() == s_recurrence(n), n
        assert rx.language() == language_Ln(n).words, n
    length, exact = optimal_regex_length(language_Ln(4))
    assert exact and length == 8
    return "n = 2..64"


@criterion(12, "D_n sweep: c(k) <= (9/4)^k (k+1)^4 for k = 6..12, k=12 under 10 min")
def test_c12_sweep():
    costs = {}
    for k in range(6, 13):
        t0 = time.time()
        cov, blocks = disjointness_full_cover(k)
        c = covering_cost(cov)
        assert c == sum(b.cost for b in blocks)
        # exact integer comparison: 4^k c <= 9^k (k+1)^4
        assert 4**k * c <= 9**k * (k + 1) ** 4, (k, c)
        costs[k] = c
    assert time.time() - t0 < 600
    return "c(k) = " + ", ".join(f"{k}:{c}" for k, c in costs.items())
