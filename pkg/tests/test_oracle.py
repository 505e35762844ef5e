"""Definitional expansion engine: degree-operator action, composition, budgets."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from orjuhl.algebra import pair_key, plain_key, scale, unit_plain, withf_key
from orjuhl.oracle import (
    apply_D,
    compose_D,
    eval_rho0,
    oracle_D2k,
    oracle_D2kI,
    oracle_DML_PN,
    oracle_P2k,
)

rationals = st.fractions(
    min_value=Fraction(-30), max_value=Fraction(30), max_denominator=12
).filter(lambda x: x.denominator > 1)


def test_degree_operator_on_powers():
    # D_j (rho^p u) = p(j+1-p) rho^{p-1} u  on plain terms
    e = apply_D(Fraction(5), unit_plain(2))
    assert e.terms == {(1, plain_key()): Fraction(2 * (5 + 1 - 2))}
    assert apply_D(Fraction(5), unit_plain(0)).is_empty()


def test_gjms_lowest_orders():
    assert oracle_P2k(1).entries == {plain_key((0,)): Fraction(1)}
    assert oracle_P2k(2).entries == {
        plain_key((1,)): Fraction(1),
        plain_key((0, 0)): Fraction(1),
    }
    assert oracle_P2k(3).entries == {
        plain_key((2,)): Fraction(1),
        plain_key((1, 0)): Fraction(2),
        plain_key((0, 1)): Fraction(2),
        plain_key((0, 0, 0)): Fraction(1),
    }


def test_gjms_degree_and_word_count():
    # every surviving word of P_2k has total degree k and there are 2^{k-1}
    for k in range(1, 6):
        t = oracle_P2k(k)
        assert len(t.entries) == 2 ** (k - 1)
        for key in t.entries:
            assert sum(a + 1 for a in key.left) == k


@settings(max_examples=15, deadline=None)
@given(rationals, st.integers(0, 2))
def test_composition_is_linear(L, N):
    # D_{2,L} acting on 2*rho^N u equals twice its action on rho^N u
    doubled = compose_D(2, L, scale(unit_plain(N), 2), "inner")
    single = compose_D(2, L, unit_plain(N), "inner")
    assert doubled == scale(single, 2)


def test_bilinear_order_one_is_all_ones():
    t = oracle_D2k(1, Fraction(7, 3))
    assert t.entries == {
        pair_key((0,), (), ()): Fraction(1),
        pair_key((), (0,), ()): Fraction(1),
        pair_key((), (), (0,)): Fraction(1),
    }


def test_linear_order_one_witness():
    ell = Fraction(7, 3)
    t = oracle_D2kI(1, ell)
    assert t.entries == {
        withf_key((0,), 0, ()): ell,
        withf_key((), 0, (0,)): ell,
        withf_key((), 1, ()): -2 * ell * ell,
    }


@settings(max_examples=15, deadline=None)
@given(rationals)
def test_dml_order_one(L):
    # R_{L-1} on u: the derivative terms vanish, only the curvature term
    # survives at constant rho-order, so the table is the single word M_2
    t = oracle_DML_PN(1, L, 0)
    assert t.entries == {plain_key((0,)): Fraction(1)}


def test_budget_margin_invariance():
    for M, N in [(2, 0), (3, 1), (3, 3)]:
        L = Fraction(17, 5)
        assert oracle_DML_PN(M, L, N).same_entries(oracle_DML_PN(M, L, N, margin=4))


def test_eval_rho0_keeps_only_constant_slice():
    e = compose_D(1, Fraction(3, 2), unit_plain(1), "inner")
    t = eval_rho0(e)
    for key in t.entries:
        assert key.variant == "plain"
