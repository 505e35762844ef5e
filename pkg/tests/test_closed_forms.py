"""Closed-form coefficient tables and their combinatorial generators."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orjuhl.algebra import plain_key, withf_key
from orjuhl.closed_forms import (
    cf_D2kI,
    cf_DML_PN,
    cf_DML_PN_f,
    cf_P2k,
    enumerate_words,
    fwd_prefix_sums,
    rev_prefix_sums,
    words_of_degree,
)
from orjuhl.oracle import oracle_DML_PN, oracle_P2k

rationals = st.fractions(
    min_value=Fraction(-30), max_value=Fraction(30), max_denominator=12
).filter(lambda x: x.denominator > 1)


def test_words_of_degree_are_compositions():
    assert list(words_of_degree(1)) == [(0,)]
    ws = set(words_of_degree(3))
    assert ws == {(2,), (1, 0), (0, 1), (0, 0, 0)}
    for d in range(1, 8):
        assert len(list(words_of_degree(d))) == 2 ** (d - 1)


def test_prefix_sums():
    # degree of index a is a+1; forward sums accumulate from the front
    assert fwd_prefix_sums((1, 0, 2)) == [2, 3, 6]
    assert rev_prefix_sums((1, 0, 2)) == [3, 4, 6]


def test_enumerate_words_with_f_budget():
    plainwords = set(enumerate_words(2, 2, with_R=False))
    assert plainwords == {((), (0, 0)), ((0,), (0,)), ((0, 0), ()), ((1,), ()), ((), (1,))}
    withf = list(enumerate_words(1, 2, with_R=True))
    # an R-budget term can spend the whole degree on the f-derivative
    assert any(r == 1 and all(w == () for w in ws) for r, *ws in withf)


def test_gjms_closed_form_matches_oracle_low_order():
    for k in range(1, 5):
        assert cf_P2k(k).same_entries(oracle_P2k(k))


def test_gjms_tables_are_palindromic():
    for k in range(1, 7):
        t = cf_P2k(k)
        for key, c in t.entries.items():
            assert t.entries[plain_key(key.left[::-1])] == c


def test_dml_integer_point_has_no_spurious_pole():
    # L = M + N makes a reverse-prefix denominator vanish; the matching
    # numerator factor cancels it and the table stays finite and palindromic
    for M in range(6):
        for N in range(M + 1):
            t = cf_DML_PN(M, Fraction(M + N), N)
            for key, c in t.entries.items():
                assert t.entries[plain_key(key.left[::-1])] == c


def test_dml_reduces_to_gjms():
    for k in range(1, 6):
        assert cf_DML_PN(k, Fraction(k), 0).same_entries(cf_P2k(k))


def test_f_insertion_zero_derivative_matches_plain():
    # the f^(0) slice of the f-inserted table carries the plain coefficients
    L = Fraction(17, 5)
    for M in range(4):
        plain = cf_DML_PN(M, L, 0)
        lifted = cf_DML_PN_f(M, L, 0)
        for key, c in plain.entries.items():
            assert lifted.entries[withf_key(key.left, 0, ())] == c


def test_linear_order_one_closed_form():
    ell = Fraction(2)
    t = cf_D2kI(1, ell)
    assert t.entries == {
        withf_key((0,), 0, ()): Fraction(2),
        withf_key((), 0, (0,)): Fraction(2),
        withf_key((), 1, ()): Fraction(-8),
    }


@settings(max_examples=10, deadline=None)
@given(rationals, st.integers(0, 3))
def test_dml_matches_definitional_expansion(L, N):
    M = 3
    assert cf_DML_PN(M, L, N).same_entries(oracle_DML_PN(M, L, N))


def test_empty_table_for_negative_budget():
    with pytest.raises(ValueError):
        cf_P2k(0)
