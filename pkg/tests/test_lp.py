from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import matrices
from oracles import lp_cover_value, s_recurrence
from rectcover.boolmat import BooleanMatrix, FormatError, all_ones, identity, triangular
from rectcover.covers import enumerate_maximal_rectangles, fractional_cost
from rectcover.lp import (
    DualCertificate,
    InfeasibleError,
    LinearProgram,
    UnboundedError,
    best_rectangle,
    build_cover_lp,
    cover_lp,
    format_dc,
    fractional_rank,
    parse_dc,
    solve_lp,
    triangular_certificate,
    uniform_certificate,
    verify_certificate,
)
from rectcover.network import matrix_B


def test_small_lp():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    p = LinearProgram([1, 1], [[1, 2], [3, 1]], ["<=", "<="], [4, 6], [(0, None), (0, None)], sense="max")
    sol = solve_lp(p)
    assert sol.objective == Fraction(14, 5)
    assert sol.x == [Fraction(8, 5), Fraction(6, 5)]
    assert sol.dual_objective == sol.objective


def test_equality_and_bounds():
    p = LinearProgram([1, 2], [[1, 1]], ["=="], [3], [(1, 2), (0, None)])
    sol = solve_lp(p)
    assert sol.objective == 4
    assert sol.x == [2, 1]


def test_infeasible_and_unbounded():
    with pytest.raises(InfeasibleError):
        solve_lp(LinearProgram([1], [[1]], ["<="], [-1], [(0, None)]))
    with pytest.raises(UnboundedError):
        solve_lp(LinearProgram([1], [[1]], [">="], [0], [(0, None)], sense="max"))


def test_degenerate_redundant_rows():
    p = LinearProgram([1, 1], [[1, 1], [2, 2], [1, 0]], [">=", ">=", "<="], [1, 2, 1], [(0, None)] * 2)
    sol = solve_lp(p)
    assert sol.objective == 1
    assert sum(d * b for d, b in zip(sol.duals, [1, 2, 1])) == 1


def test_bad_program_rejected():
    with pytest.raises(ValueError):
        LinearProgram([1], [[1, 2]], [">="], [1], [(0, None)])
    with pytest.raises(ValueError):
        LinearProgram([1], [[1]], ["!="], [1], [(0, None)])


@given(matrices(3, 4))
@settings(max_examples=40, deadline=None)
def test_cover_lp_matches_float_oracle(A):
    for weighted in (True, False):
        sol = cover_lp(A, weighted)
        assert abs(float(sol.value) - lp_cover_value(list(A.rows), A.n, weighted)) < 1e-7
        if weighted:
            assert fractional_cost(sol.covering) == sol.value
        assert sum(sol.duals.values()) == sol.value


@given(matrices(4, 4))
@settings(max_examples=30, deadline=None)
def test_unweighted_maximal_columns_suffice(A):
    # the unweighted program has maximal rectangles only; the oracle uses all of them
    prog = build_cover_lp(A, weighted=False)
    assert prog.rectangles == enumerate_maximal_rectangles(A)
    assert abs(float(solve_lp(prog.program).objective) - lp_cover_value(list(A.rows), A.n, False)) < 1e-7


def test_weighted_needs_non_maximal_columns():
    A = BooleanMatrix.from_lists([[1, 1], [1, 0]])
    from rectcover.lp import _cover_program

    maximal_only = solve_lp(_cover_program(A, enumerate_maximal_rectangles(A), True, True).program)
    assert maximal_only.objective == 6
    assert cover_lp(A, True).value == 5


@pytest.mark.parametrize("n", range(2, 9))
def test_triangular_lp_value(n):
    assert cover_lp(triangular(n), True).value == s_recurrence(n)


def test_b_lp_value():
    assert cover_lp(matrix_B(), True).value == 20


def test_fractional_rank_examples():
    assert fractional_rank(identity(3)) == 3
    assert fractional_rank(all_ones(2, 3)) == 1
    assert fractional_rank(BooleanMatrix.from_lists([[1, 1], [0, 1]])) == 2


@given(matrices(4, 4), st.data())
@settings(max_examples=40, deadline=None)
def test_best_rectangle_is_the_max(A, data):
    from oracles import all_rectangles

    y = {e: Fraction(data.draw(st.integers(0, 6)), 2) for e in A.ones()}
    viol, r = best_rectangle(A, y)
    brute = max(sum(y[(i, j)] for i in R for j in C) - len(R) - len(C) for R, C in all_rectangles(list(A.rows), A.n))
    assert viol == brute
    assert sum(y[c] for c in r.cells()) - r.cost == brute


@pytest.mark.parametrize("n", range(2, 13))
def test_triangular_certificate(n):
    cert = triangular_certificate(n)
    assert cert.total() == s_recurrence(n)
    tri = verify_certificate(triangular(n), cert, "triangular")
    assert tri.feasible
    if n <= 9:
        gen = verify_certificate(triangular(n), cert, "general")
        assert gen.feasible and gen.worst_slack == tri.worst_slack


def test_certificate_infeasible_witness():
    cert = triangular_certificate(5)
    cert.values[(0, 1)] = Fraction(3)
    chk = verify_certificate(triangular(5), cert)
    assert not chk.feasible
    r = chk.witness
    assert sum(cert.get(i, j) for i in r.rows for j in r.cols) - r.cost == -chk.worst_slack
    assert verify_certificate(triangular(5), cert, "general").worst_slack == chk.worst_slack


def test_uniform_certificate():
    cert = uniform_certificate(identity(3), Fraction(2))
    assert verify_certificate(identity(3), cert).feasible
    assert not verify_certificate(identity(3), uniform_certificate(identity(3), Fraction(5, 2))).feasible


def test_negative_value_is_infeasible():
    cert = DualCertificate(2, 2, {(0, 0): Fraction(-1)})
    assert not verify_certificate(identity(2), cert).feasible


def test_dc_round_trip():
    cert = triangular_certificate(6)
    back = parse_dc(format_dc(cert))
    assert back.values == cert.values and back.host_dims == (6, 6)
    with pytest.raises(FormatError):
        parse_dc("2 2\n0 0 1\n")
    with pytest.raises(FormatError):
        parse_dc("2 2\n5 0 1/1\n")
