"""Free noncommutative algebra of formal M-words.

An M-word (A_1, ..., A_r) encodes the composition M_{2(A_r+1)} ... M_{2(A_1+1)}
with A_1 applied first, i.e. storage index 0 is the innermost factor.  The
M-symbols are free noncommuting generators carrying no relations; they commute
with the formal variable rho and with derivative markers of the inserted
function f.

Expressions live in one of three basis variants:

* plain  -- a word applied to u,
* withf  -- outer_word( f^(R) * inner_word(u) ),
* pair   -- outer_word( left_word(u) * right_word(v) ).

A FormalExpr is a rho-graded linear combination of basis keys with exact
rational coefficients; a CoeffTable is its rho^0 slice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .rationals import ParamPoint

MWord = tuple[int, ...]

PLAIN = "plain"
WITHF = "withf"
PAIR = "pair"


@dataclass(frozen=True)
class BasisKey:
    """One noncommutative basis element.

    Variant is implied by the populated fields: plain keys have f_order None
    and right None (word stored in ``left``); withf keys carry an f_order and
    no right word; pair keys carry a right word and no f_order.
    """

    outer: MWord = ()
    f_order: Optional[int] = None
    left: MWord = ()
    right: Optional[MWord] = None

    def __post_init__(self):
        if self.f_order is not None and self.right is not None:
            raise ValueError("a key cannot carry both an f-marker and a right word")
        if self.f_order is not None and self.f_order < 0:
            raise ValueError("f_order must be nonnegative")
        if self.variant == PLAIN and self.outer:
            raise ValueError("plain keys store their word in `left` only")

    @property
    def variant(self) -> str:
        if self.right is not None:
            return PAIR
        if self.f_order is not None:
            return WITHF
        return PLAIN

    def sort_key(self):
        return (
            self.variant,
            self.outer,
            -1 if self.f_order is None else self.f_order,
            self.left,
            self.right if self.right is not None else (),
        )


def plain_key(word: MWord = ()) -> BasisKey:
    return BasisKey(left=tuple(word))


def withf_key(outer: MWord, f_order: int, inner: MWord) -> BasisKey:
    return BasisKey(outer=tuple(outer), f_order=f_order, left=tuple(inner))


def pair_key(outer: MWord, left: MWord, right: MWord) -> BasisKey:
    return BasisKey(outer=tuple(outer), left=tuple(left), right=tuple(right))


class VariantMismatch(ValueError):
    """Operands mix basis variants, or a slot is invalid for the variant."""


# Slots an attach_M call may target, per variant.
_VALID_SLOTS = {
    PLAIN: {"inner"},
    WITHF: {"inner", "outer"},
    PAIR: {"left", "right", "outer"},
}


class FormalExpr:
    """rho-graded linear combination: (rho_power, BasisKey) -> Fraction.

    Immutable by convention; every operation returns a fresh expression and
    zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, BasisKey], Fraction] | None = None):
        self.terms: dict[tuple[int, BasisKey], Fraction] = {}
        if terms:
            for (p, key), c in terms.items():
                if c:
                    if p < 0:
                        raise ValueError("negative rho power")
                    self.terms[(p, key)] = Fraction(c)

    @property
    def variant(self) -> Optional[str]:
        for (_, key) in self.terms:
            return key.variant
        return None

    def is_empty(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalExpr) and self.terms == other.terms

    def __repr__(self) -> str:
        items = ", ".join(
            f"rho^{p}*{key}: {c}" for (p, key), c in sorted(
                self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1].sort_key())
            )
        )
        return f"FormalExpr({{{items}}})"

    def items(self) -> Iterator[tuple[tuple[int, BasisKey], Fraction]]:
        return iter(self.terms.items())

    def max_rho_power(self) -> int:
        return max((p for (p, _) in self.terms), default=0)


def unit_plain(rho_power: int = 0) -> FormalExpr:
    """The expression rho^rho_power * u."""
    return FormalExpr({(rho_power, plain_key()): Fraction(1)})


def _check_same_variant(e1: FormalExpr, e2: FormalExpr) -> None:
    v1, v2 = e1.variant, e2.variant
    if v1 is not None and v2 is not None and v1 != v2:
        raise VariantMismatch(f"cannot combine {v1} with {v2}")


def add(e1: FormalExpr, e2: FormalExpr) -> FormalExpr:
    _check_same_variant(e1, e2)
    out = dict(e1.terms)
    for k, c in e2.terms.items():
        s = out.get(k, Fraction(0)) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return FormalExpr(out)


def scale(e: FormalExpr, c: Fraction | int) -> FormalExpr:
    c = Fraction(c)
    if not c:
        return FormalExpr()
    return FormalExpr({k: v * c for k, v in e.terms.items()})


def _attach_to_key(key: BasisKey, symbol_index: int, slot: str) -> BasisKey:
    if slot not in _VALID_SLOTS[key.variant]:
        raise VariantMismatch(f"slot {slot!r} invalid for {key.variant} key")
    if slot == "outer":
        return BasisKey(key.outer + (symbol_index,), key.f_order, key.left, key.right)
    if slot == "right":
        return BasisKey(key.outer, key.f_order, key.left, key.right + (symbol_index,))
    # "inner" and "left" both target the left word
    return BasisKey(key.outer, key.f_order, key.left + (symbol_index,), key.right)


def attach_M(e: FormalExpr, symbol_index: int, slot: str) -> FormalExpr:
    """Append symbol_index as the new outermost entry of the selected word."""
    if symbol_index < 0:
        raise ValueError("M-symbol index must be nonnegative")
    return FormalExpr(
        {(p, _attach_to_key(key, symbol_index, slot)): c for (p, key), c in e.terms.items()}
    )


def pair_product(eu: FormalExpr, ev: FormalExpr) -> FormalExpr:
    """Bilinear product of two plain expressions into the pair variant."""
    for e in (eu, ev):
        if e.variant not in (None, PLAIN):
            raise VariantMismatch("pair_product requires plain operands")
    out: dict[tuple[int, BasisKey], Fraction] = {}
    for (p, ku), cu in eu.terms.items():
        for (q, kv), cv in ev.terms.items():
            key = pair_key((), ku.left, kv.left)
            c = out.get((p + q, key), Fraction(0)) + cu * cv
            if c:
                out[(p + q, key)] = c
            else:
                out.pop((p + q, key), None)
    return FormalExpr(out)


def inject_f(e: FormalExpr) -> FormalExpr:
    """Multiply a plain expression by the formal function f (derivative order 0)."""
    if e.variant not in (None, PLAIN):
        raise VariantMismatch("inject_f requires a plain operand")
    return FormalExpr(
        {(p, withf_key((), 0, key.left)): c for (p, key), c in e.terms.items()}
    )


def strip_f(key: BasisKey) -> BasisKey:
    """Erase an f_order=0 marker: outer(f^(0) inner(u)) becomes the plain word
    inner followed by outer (f == 1 commutes away)."""
    if key.variant != WITHF or key.f_order != 0:
        raise ValueError("strip_f requires a withf key of f_order 0")
    return plain_key(key.left + key.outer)


@dataclass
class CoeffTable:
    """rho^0 slice of an expansion: BasisKey -> exact rational coefficient."""

    entries: dict[BasisKey, Fraction] = field(default_factory=dict)
    params: ParamPoint = field(default_factory=dict)
    provenance: str = "oracle"

    def __post_init__(self):
        self.entries = {k: Fraction(c) for k, c in self.entries.items() if c}

    def sorted_items(self) -> list[tuple[BasisKey, Fraction]]:
        return sorted(self.entries.items(), key=lambda kv: kv[0].sort_key())

    def same_entries(self, other: "CoeffTable") -> bool:
        return self.entries == other.entries

    def is_empty(self) -> bool:
        return not self.entries


def table_add(t1: CoeffTable, t2: CoeffTable) -> CoeffTable:
    out = dict(t1.entries)
    for k, c in t2.entries.items():
        s = out.get(k, Fraction(0)) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return CoeffTable(out, t1.params or t2.params, t1.provenance)


def table_scale(t: CoeffTable, c: Fraction | int) -> CoeffTable:
    c = Fraction(c)
    return CoeffTable({k: v * c for k, v in t.entries.items()}, t.params, t.provenance)
