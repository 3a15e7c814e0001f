from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import matrices
from oracles import all_rectangles
from rectcover.boolmat import FormatError, all_ones, identity, triangular
from rectcover.covers import (
    Covering,
    CoveringError,
    FractionalCovering,
    Rectangle,
    covering_cost,
    enumerate_maximal_rectangles,
    format_cov,
    fractional_cost,
    is_partition,
    is_rectangle_of,
    iter_rectangles,
    parse_cov,
    validate_covering,
)
from rectcover.network import matrix_B, triangular_partition


def test_rectangle_normalises():
    r = Rectangle((2, 0, 2), (1,))
    assert r.rows == (0, 2)
    assert r.cost == 3
    assert (2, 1) in r and (1, 1) not in r
    with pytest.raises(ValueError):
        Rectangle((), (1,))


def test_triangular_partition_is_valid():
    for n in range(2, 20):
        c = triangular_partition(n)
        assert is_partition(c)


def test_b_block_covering():
    B = matrix_B()
    c = Covering(B, (Rectangle(range(4), range(8)), Rectangle(range(4, 8), range(4, 8))))
    assert covering_cost(c) == 20
    assert is_partition(c)


def test_zero_entry_is_reported():
    c = Covering(triangular(3), (Rectangle((0, 1), (1, 2)),))
    with pytest.raises(CoveringError) as err:
        validate_covering(c)
    assert err.value.entry == (1, 1)


def test_uncovered_entry_is_reported():
    c = Covering(triangular(3), (Rectangle((0,), (1,)),))
    with pytest.raises(CoveringError) as err:
        validate_covering(c)
    assert err.value.entry == (0, 2)


def test_overlap_is_not_a_partition():
    J = all_ones(2, 2)
    c = Covering(J, (Rectangle((0, 1), (0, 1)), Rectangle((0,), (0,))))
    assert covering_cost(c) == 6
    assert not is_partition(c)


def test_fractional_cost_and_deficit():
    I = identity(2)
    f = FractionalCovering(I, ((Rectangle((0,), (0,)), Fraction(1)), (Rectangle((1,), (1,)), Fraction(1, 2))))
    with pytest.raises(CoveringError) as err:
        fractional_cost(f)
    assert err.value.entry == (1, 1)
    f = FractionalCovering(I, ((Rectangle((0,), (0,)), Fraction(1)), (Rectangle((1,), (1,)), Fraction(1))))
    assert fractional_cost(f) == 4


@given(matrices(4, 5))
def test_iter_rectangles_matches_enumeration(A):
    got = sorted((r.rows, r.cols) for r in iter_rectangles(A))
    assert got == sorted(all_rectangles(list(A.rows), A.n))


@given(matrices(5, 5))
def test_maximal_rectangles(A):
    rects = enumerate_maximal_rectangles(A)
    every = [Rectangle(R, C) for R, C in all_rectangles(list(A.rows), A.n)]
    # maximal = not strictly contained in another rectangle
    expect = sorted(
        (r.rows, r.cols)
        for r in every
        if not any(q != r and set(r.rows) <= set(q.rows) and set(r.cols) <= set(q.cols) for q in every)
    )
    assert sorted((r.rows, r.cols) for r in rects) == expect
    assert all(is_rectangle_of(A, r) for r in rects)


@given(matrices(4, 4), st.data())
def test_cov_round_trip(A, data):
    rects = enumerate_maximal_rectangles(A)
    picked = data.draw(st.lists(st.sampled_from(rects), max_size=5))
    c = Covering(A, tuple(picked))
    assert parse_cov(format_cov(c), A) == c


def test_fractional_cov_round_trip():
    T = triangular(3)
    f = FractionalCovering(T, ((Rectangle((0,), (1, 2)), Fraction(1, 3)),))
    assert parse_cov(format_cov(f), T) == f


@pytest.mark.parametrize(
    "text",
    [
        "3 3 1\nR 0 C 1\n",
        "4 4 2\nR 0 C 1\n",
        "4 4 1\nR 1,0 C 2\n",
        "4 4 1\nR 0 C 9\n",
        "4 4 1\nR 0 C 1 W 1\n",
        "4 4 1\nQ 0 C 1\n",
    ],
)
def test_cov_rejects_malformed(text):
    with pytest.raises(FormatError):
        parse_cov(text, triangular(4))
