"""Serialization of coefficient tables: JSON (round-trip exact), CSV, LaTeX.

The JSON layout is versioned as ``orjuhl/v1``.  Rational values are written as
decimal strings for numerator and denominator so that arbitrarily large exact
values survive any JSON implementation; integer parameters stay plain ints.
Terms are emitted in the canonical key order, so equal tables serialize to
byte-identical documents.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .algebra import BasisKey, CoeffTable

SCHEMA = "orjuhl/v1"


def _frac_to_json(x: Fraction) -> dict[str, str]:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _frac_from_json(obj: dict[str, str]) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def _param_to_json(v: Fraction | int) -> Any:
    if isinstance(v, int):
        return v
    return _frac_to_json(v)


def _param_from_json(v: Any) -> Fraction | int:
    if isinstance(v, int):
        return v
    return _frac_from_json(v)


def table_to_dict(table: CoeffTable) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "params": {name: _param_to_json(v) for name, v in sorted(table.params.items())},
        "terms": [
            {
                "outer": list(key.outer),
                "f_order": key.f_order,
                "left": list(key.left),
                "right": None if key.right is None else list(key.right),
                "coeff": _frac_to_json(coeff),
            }
            for key, coeff in table.sorted_items()
        ],
    }


def table_to_json(table: CoeffTable) -> str:
    return json.dumps(table_to_dict(table), indent=2, sort_keys=False) + "\n"


def table_from_dict(doc: dict[str, Any]) -> CoeffTable:
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema: {doc.get('schema')!r}")
    entries: dict[BasisKey, Fraction] = {}
    for term in doc["terms"]:
        key = BasisKey(
            outer=tuple(term["outer"]),
            f_order=term["f_order"],
            left=tuple(term["left"]),
            right=None if term["right"] is None else tuple(term["right"]),
        )
        entries[key] = _frac_from_json(term["coeff"])
    params = {name: _param_from_json(v) for name, v in doc.get("params", {}).items()}
    return CoeffTable(entries, params)


def table_from_json(text: str) -> CoeffTable:
    return table_from_dict(json.loads(text))


def table_to_csv(table: CoeffTable) -> str:
    """Flat CSV: one term per row, words as dot-joined indices, exact coeff."""
    lines = ["outer,f_order,left,right,coeff_num,coeff_den"]
    for key, coeff in table.sorted_items():
        lines.append(
            ",".join(
                [
                    ".".join(map(str, key.outer)),
                    "" if key.f_order is None else str(key.f_order),
                    ".".join(map(str, key.left)),
                    "" if key.right is None else ".".join(map(str, key.right)),
                    str(coeff.numerator),
                    str(coeff.denominator),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _word_latex(word: tuple[int, ...]) -> str:
    """Render a word as a left-to-right operator product, outermost first.

    Index a stands for the symbol M_{2(a+1)}; storage order is innermost
    first, so the rendered product reverses the tuple.  Adjacent equal
    symbols collapse into powers: (0, 0) renders as ``M_2^2``.
    """
    if not word:
        return ""
    symbols = [2 * (a + 1) for a in reversed(word)]
    parts: list[str] = []
    i = 0
    while i < len(symbols):
        j = i
        while j < len(symbols) and symbols[j] == symbols[i]:
            j += 1
        run = j - i
        parts.append(f"M_{{{symbols[i]}}}" + (f"^{{{run}}}" if run > 1 else ""))
        i = j
    return " ".join(parts)


def _coeff_latex(c: Fraction) -> str:
    sign = "-" if c < 0 else ""
    c = abs(c)
    if c.denominator == 1:
        return f"{sign}{c.numerator}"
    return f"{sign}\\frac{{{c.numerator}}}{{{c.denominator}}}"


def _key_latex(key: BasisKey) -> str:
    variant = key.variant
    if variant == "plain":
        body = _word_latex(key.left)
        return body if body else "1"
    if variant == "withf":
        inner = _word_latex(key.left)
        f_part = f"f^{{({key.f_order})}}"
        inside = f"{f_part} \\, {inner}(u)" if inner else f"{f_part} u"
        outer = _word_latex(key.outer)
        return f"{outer}\\left( {inside} \\right)" if outer else inside
    left = _word_latex(key.left)
    right = _word_latex(key.right)
    inside = f"{left}(u)" if left else "u"
    inside += f" \\, {right}(v)" if right else " \\, v"
    outer = _word_latex(key.outer)
    return f"{outer}\\left( {inside} \\right)" if outer else inside


def table_to_latex(table: CoeffTable) -> str:
    """One-line LaTeX sum of the table's terms in canonical order.

    Coefficients of magnitude one are suppressed next to a nonempty symbol
    product; the empty table renders as ``0``.
    """
    items = sorted(
        table.entries.items(),
        key=lambda kv: (
            len(kv[0].outer) + len(kv[0].left) + len(kv[0].right or ()),
            kv[0].sort_key(),
        ),
    )
    if not items:
        return "0"
    parts: list[str] = []
    for pos, (key, coeff) in enumerate(items):
        body = _key_latex(key)
        mag = abs(coeff)
        if mag == 1 and body != "1":
            piece = body
        elif body == "1":
            piece = _coeff_latex(mag)
        else:
            piece = f"{_coeff_latex(mag)} \\, {body}"
        if pos == 0:
            parts.append(("-" if coeff < 0 else "") + piece)
        else:
            parts.append(("- " if coeff < 0 else "+ ") + piece)
    return " ".join(parts)


def jsonable(value: Any) -> Any:
    """Recursively convert Fractions (and tuples) for json.dumps.

    Used for verification reports, which mix suite metadata with exact
    rational witnesses.
    """
    if isinstance(value, Fraction):
        return _frac_to_json(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, BasisKey):
        return {
            "outer": list(value.outer),
            "f_order": value.f_order,
            "left": list(value.left),
            "right": None if value.right is None else list(value.right),
        }
    return value
