"""Free-word algebra: basis keys, graded expressions, coefficient tables."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orjuhl.algebra import (
    BasisKey,
    CoeffTable,
    FormalExpr,
    VariantMismatch,
    add,
    attach_M,
    inject_f,
    pair_key,
    pair_product,
    plain_key,
    scale,
    strip_f,
    table_add,
    unit_plain,
    withf_key,
)

words = st.lists(st.integers(0, 3), max_size=3).map(tuple)
coeffs = st.fractions(max_denominator=12).filter(bool)


@st.composite
def plain_exprs(draw):
    n = draw(st.integers(0, 4))
    terms = {}
    for _ in range(n):
        p = draw(st.integers(0, 3))
        w = draw(words)
        terms[(p, plain_key(w))] = draw(coeffs)
    return FormalExpr(terms)


def test_key_variants():
    assert plain_key((1, 0)).variant == "plain"
    assert withf_key((2,), 1, ()).variant == "withf"
    assert pair_key((0,), (1,), ()).variant == "pair"
    with pytest.raises(ValueError):
        BasisKey(outer=(0,), f_order=1, left=(), right=())
    with pytest.raises(ValueError):
        BasisKey(outer=(0,), f_order=None, left=(), right=None)  # plain with outer
    with pytest.raises(ValueError):
        withf_key((), -1, ())


def test_variant_mixing_rejected():
    with pytest.raises(VariantMismatch):
        add(unit_plain(), FormalExpr({(0, withf_key((), 0, ())): Fraction(1)}))
    with pytest.raises(VariantMismatch):
        attach_M(unit_plain(), 0, "right")
    with pytest.raises(VariantMismatch):
        pair_product(unit_plain(), FormalExpr({(0, withf_key((), 0, ())): Fraction(1)}))


@given(plain_exprs(), plain_exprs(), plain_exprs())
def test_add_is_commutative_and_associative(a, b, c):
    assert add(a, b) == add(b, a)
    assert add(add(a, b), c) == add(a, add(b, c))


@given(plain_exprs(), coeffs, coeffs)
def test_scale_is_linear(e, c1, c2):
    assert scale(e, c1 + c2) == add(scale(e, c1), scale(e, c2))
    assert scale(e, 0).is_empty()


@given(plain_exprs(), plain_exprs(), plain_exprs())
def test_pair_product_bilinear(a, b, c):
    assert pair_product(add(a, b), c) == add(pair_product(a, c), pair_product(b, c))
    assert pair_product(a, add(b, c)) == add(pair_product(a, b), pair_product(a, c))


def test_attach_targets_outermost_position():
    e = attach_M(attach_M(unit_plain(), 0, "inner"), 2, "inner")
    (key,) = [k for (_, k) in e.terms]
    assert key.left == (0, 2)  # index 0 applied first, stored first


def test_inject_and_strip_f():
    e = inject_f(attach_M(unit_plain(), 1, "inner"))
    (key,) = [k for (_, k) in e.terms]
    assert key == withf_key((), 0, (1,))
    outer = attach_M(e, 2, "outer")
    (key2,) = [k for (_, k) in outer.terms]
    assert strip_f(key2) == plain_key((1, 2))
    with pytest.raises(ValueError):
        strip_f(withf_key((), 1, ()))


def test_zero_coefficients_never_stored():
    e = FormalExpr({(0, plain_key()): Fraction(0)})
    assert e.is_empty()
    cancel = add(unit_plain(), scale(unit_plain(), -1))
    assert cancel.is_empty()
    t = CoeffTable({plain_key(): Fraction(0)})
    assert t.is_empty()


def test_table_add_cancels():
    t1 = CoeffTable({plain_key((0,)): Fraction(2)})
    t2 = CoeffTable({plain_key((0,)): Fraction(-2), plain_key((1,)): Fraction(1)})
    out = table_add(t1, t2)
    assert out.entries == {plain_key((1,)): Fraction(1)}


def test_sort_key_canonical_order():
    keys = [pair_key((), (), ()), withf_key((), 0, ()), plain_key((1,)), plain_key((0, 0))]
    ordered = sorted(keys, key=lambda k: k.sort_key())
    assert [k.variant for k in ordered] == ["pair", "plain", "plain", "withf"]
    assert ordered[1].left == (0, 0)
