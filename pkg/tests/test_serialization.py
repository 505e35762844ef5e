"""JSON round-trips, CSV layout, LaTeX rendering."""

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orjuhl.algebra import CoeffTable, pair_key, plain_key, withf_key
from orjuhl.serialization import (
    jsonable,
    table_from_json,
    table_to_csv,
    table_to_json,
    table_to_latex,
)

words = st.lists(st.integers(0, 4), max_size=3).map(tuple)
coeffs = st.fractions(max_denominator=100).filter(bool)


@st.composite
def tables(draw):
    variant = draw(st.sampled_from(["plain", "withf", "pair"]))
    entries = {}
    for _ in range(draw(st.integers(0, 5))):
        if variant == "plain":
            key = plain_key(draw(words))
        elif variant == "withf":
            key = withf_key(draw(words), draw(st.integers(0, 3)), draw(words))
        else:
            key = pair_key(draw(words), draw(words), draw(words))
        entries[key] = draw(coeffs)
    params = {"L": draw(coeffs), "k": draw(st.integers(1, 9))}
    return CoeffTable(entries, params)


@given(tables())
def test_json_round_trip_is_exact(table):
    back = table_from_json(table_to_json(table))
    assert back.same_entries(table)
    assert dict(back.params) == dict(table.params)


@given(tables())
def test_json_is_canonical(table):
    # serializing an equal table built in a different insertion order gives
    # byte-identical text
    shuffled = CoeffTable(dict(reversed(table.sorted_items())), table.params)
    assert table_to_json(table) == table_to_json(shuffled)


def test_json_schema_shape():
    t = CoeffTable({plain_key((1,)): Fraction(-3, 7)}, {"L": Fraction(1, 2), "k": 2})
    doc = json.loads(table_to_json(t))
    assert doc["schema"] == "orjuhl/v1"
    assert doc["params"] == {"L": {"num": "1", "den": "2"}, "k": 2}
    assert doc["terms"] == [
        {
            "outer": [],
            "f_order": None,
            "left": [1],
            "right": None,
            "coeff": {"num": "-3", "den": "7"},
        }
    ]


def test_schema_version_enforced():
    with pytest.raises(ValueError):
        table_from_json('{"schema": "orjuhl/v0", "params": {}, "terms": []}')


def test_csv_layout():
    t = CoeffTable({withf_key((2,), 1, (0,)): Fraction(5, 3)})
    lines = table_to_csv(t).splitlines()
    assert lines[0] == "outer,f_order,left,right,coeff_num,coeff_den"
    assert lines[1] == "2,1,0,,5,3"


def test_latex_plain_rendering():
    t = CoeffTable({plain_key((1,)): Fraction(1), plain_key((0, 0)): Fraction(1)})
    assert table_to_latex(t) == "M_{4} + M_{2}^{2}"


def test_latex_signs_and_fractions():
    t = CoeffTable({plain_key((0,)): Fraction(-2, 3)})
    assert table_to_latex(t) == "-\\frac{2}{3} \\, M_{2}"


def test_latex_empty_table():
    assert table_to_latex(CoeffTable({})) == "0"


def test_jsonable_handles_nesting():
    data = {"x": Fraction(1, 3), "w": [plain_key((0,)), (Fraction(2), 5)]}
    out = jsonable(data)
    assert out["x"] == {"num": "1", "den": "3"}
    assert out["w"][0]["left"] == [0]
    assert out["w"][1] == [{"num": "2", "den": "1"}, 5]
    json.dumps(out)  # must be serializable as-is
