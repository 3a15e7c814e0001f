from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import matrices
from oracles import milp_or2, min_cover, s_recurrence
from rectcover.boolmat import BooleanMatrix, all_ones, identity, kneser_submatrix, kronecker, triangular
from rectcover.covers import BudgetExceeded, covering_cost, is_partition, validate_covering
from rectcover.exact import (
    DirectProductError,
    NechiporukError,
    exact_boolean_rank,
    exact_or2,
    exact_sum2,
    naive_or2,
    naive_sum2,
    nechiporuk_bound,
    verify_direct_product,
    verify_direct_product_sum,
)
from rectcover.lp import fractional_rank
from rectcover.network import covering_to_depth2, matrix_B, upper_pair_family


@given(matrices(4, 4))
@settings(max_examples=80, deadline=None)
def test_exact_solvers_match_oracle(A):
    rows = list(A.rows)
    res = exact_or2(A)
    assert res.optimal and res.lower_bound == res.cost
    validate_covering(res.covering)
    assert covering_cost(res.covering) == res.cost == min_cover(rows, A.n)
    part = exact_sum2(A)
    assert is_partition(part.covering)
    assert part.cost == min_cover(rows, A.n, partition=True)
    assert exact_boolean_rank(A) == min_cover(rows, A.n, unit=True)
    assert res.cost <= part.cost


@given(matrices(3, 4))
@settings(max_examples=40, deadline=None)
def test_naive_dp_matches_oracle(A):
    assert naive_or2(A) == min_cover(list(A.rows), A.n)
    assert naive_sum2(A) == min_cover(list(A.rows), A.n, partition=True)


@pytest.mark.parametrize("n", range(2, 9))
def test_triangular(n):
    res = exact_or2(triangular(n))
    assert res.optimal and res.cost == s_recurrence(n)


def test_b():
    cost, cov = exact_or2(matrix_B())
    assert cost == 20
    validate_covering(cov)


def test_trivial_values():
    assert exact_or2(all_ones(3, 4)).cost == 7
    assert exact_sum2(all_ones(2, 2)).cost == 4
    assert exact_sum2(identity(2)).cost == 4
    assert exact_sum2(triangular(4)).cost == 8
    assert exact_boolean_rank(triangular(3)) == 2
    assert exact_boolean_rank(identity(5)) == 5
    assert exact_boolean_rank(all_ones(3, 3)) == 1


def test_rank_at_most_witness_size():
    for A in (triangular(6), matrix_B(), kneser_submatrix(4, 1, 1)):
        assert exact_boolean_rank(A) <= len(exact_or2(A).covering)


@pytest.mark.parametrize("k,x,y", [(4, 1, 1), (5, 1, 1), (5, 3, 1), (5, 2, 2), (4, 2, 2)])
def test_kneser_blocks_against_milp(k, x, y):
    A = kneser_submatrix(k, x, y)
    res = exact_or2(A)
    assert res.optimal
    assert res.cost == milp_or2(list(A.rows), A.n)


def test_budget_exhaustion_keeps_a_valid_bound():
    A = kneser_submatrix(5, 2, 1)
    res = exact_or2(A, budget=200)
    assert not res.optimal
    validate_covering(res.covering)
    assert res.lower_bound <= 33 <= res.cost
    full = exact_or2(A, budget=200, fallback=True)
    assert full.optimal and full.cost == 33 and full.solver == "milp"
    validate_covering(full.covering)
    with pytest.raises(BudgetExceeded):
        exact_boolean_rank(kneser_submatrix(6, 2, 1), budget=1)


def test_nechiporuk():
    assert nechiporuk_bound(identity(4), 1, 1) == 4
    assert nechiporuk_bound(triangular(4), 2, 2) == Fraction(3, 2)
    with pytest.raises(NechiporukError) as err:
        nechiporuk_bound(all_ones(2, 2), 1, 1)
    assert err.value.witness is not None


@given(matrices(4, 4))
@settings(max_examples=30, deadline=None)
def test_nechiporuk_is_a_lower_bound(A):
    for k in (1, 2, 3):
        try:
            b = nechiporuk_bound(A, k, k)
        except NechiporukError:
            continue
        assert b <= exact_or2(A).cost


def test_direct_product_identity_times_ones():
    K, M = identity(2), all_ones(2, 2)
    net = covering_to_depth2(exact_or2(kronecker(K, M)).covering)
    rep = verify_direct_product(K, M, net)
    assert rep.ok
    assert rep.frac_rank == 2 and rep.min_edges == 4 and rep.total_edges == 8
    assert rep.total_edges >= rep.weight_sum >= rep.chain_bound


def test_direct_product_family_network():
    K = BooleanMatrix.from_lists([[1, 1], [0, 1]])
    M = all_ones(4, 4)
    rep = verify_direct_product(K, M, upper_pair_family(4))
    assert rep.ok
    assert rep.total_edges == 17
    assert rep.frac_rank == fractional_rank(K) == 2
    assert all(e.weight <= 1 for e in rep.edge_rects)
    assert "EDGES" in rep.text() and rep.csv().startswith("section")


def test_direct_product_rejects_wrong_network():
    with pytest.raises(DirectProductError):
        verify_direct_product(identity(2), all_ones(2, 2), upper_pair_family(1))


def test_direct_product_sum():
    K, M = identity(2), all_ones(1, 1)
    net = covering_to_depth2(exact_sum2(kronecker(K, M)).covering)
    rep = verify_direct_product_sum(K, M, net)
    assert rep.ok and rep.total_edges == 4
    J = all_ones(2, 2)
    from rectcover.covers import Covering, Rectangle

    amb = covering_to_depth2(Covering(J, (Rectangle((0, 1), (0, 1)), Rectangle((0,), (0,)))))
    with pytest.raises(DirectProductError):
        verify_direct_product_sum(BooleanMatrix.from_lists([[1]]), J, amb)
