import csv
import io

import pytest

from diamca.fixtures import display_table
from diamca.rules import RULES, T, T1, T3, TS, blank_preserving, rule_t, rule_t_formula
from diamca.symbols import A1, ARROW, EMPTY, PRODUCT, has_arrow, layer1


def test_table_sizes():
    assert {n: len(r.table) for n, r in RULES.items()} == {"t1": 16, "t": 64, "t3": 9, "ts": 576}


@pytest.mark.parametrize(
    "center,right,out",
    [("_", "0", "_"), ("0", "_", "1"), ("1", "2", "2"), ("2", "_", "0"), ("0", "1", "0"), ("2", "0", "2")],
)
def test_odometer_entries(center, right, out):
    assert T1(center, right) == out


def test_arrow_moves_left_off_empty_and_two():
    assert T("_", "<") == "<"  # arrow on Empty moves in
    assert T("0", "C") == "B"  # arrow on Two moves onto the zero, which ticks
    assert T("0", "A") == "0"  # arrow on Zero rests
    assert T("A", "0") == "A"  # resting arrow stays
    assert T("<", "_") == "_"  # moving arrow leaves


def test_arrows_merge():
    assert T("<", "<") == "<"
    assert T("A", "C") == "B"


def test_t3_involution():
    assert [T3(s, "a") for s in "abc"] == ["a", "c", "b"]


def test_ts_freezes_bottom_under_arrow():
    assert TS("<b", "_a") == "_b"
    assert TS("_b", "_a") == "_c"
    assert TS("0c", "<a")[1] == "b"


def test_display_matches_rule():
    shown = display_table()
    assert len(shown) == 64
    for (c, r), outs in shown.items():
        assert outs == {T(c, r)}


def test_literal_formula_differs_only_on_resting_right_arrow():
    diff = {(c, r) for c in PRODUCT.symbols for r in PRODUCT.symbols if rule_t(c, r) != rule_t_formula(c, r)}
    assert diff == {("<", "A"), ("<", "B"), ("C", "A"), ("C", "B")}


@pytest.mark.parametrize("name", ["t1", "t", "ts"])
def test_blank_preservation(name):
    assert blank_preserving(RULES[name])


def test_blank_preservation_detects_corruption():
    assert not blank_preserving(T.replace("0", "_", "_"))


def test_replace_marks_name():
    bad = T1.replace("0", "_", "0")
    assert bad.name == "t1*" and bad("0", "_") == "0" and T1("0", "_") == "1"


@pytest.mark.parametrize("name", list(RULES))
def test_csv_dump(name):
    text = RULES[name].to_csv()
    assert "\r" not in text
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["center", "right", "output"]
    assert {(c, r): o for c, r, o in rows[1:]} == RULES[name].table


def test_as_array_agrees_with_table():
    arr = T.as_array()
    idx = PRODUCT.index()
    for (c, r), v in T.table.items():
        assert arr[idx[c], idx[r]] == idx[v]


def test_arrow_count_non_increasing_on_blank_background():
    from diamca.config import Configuration
    from diamca.engine import orbit

    x = Configuration.from_word("<<_<<<_<", start=0)
    counts = [sum(has_arrow(y[i]) for i in range(-30, 10)) for y in orbit(x, T, 25)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))
    # adjacent moving arrows travel together; a moving arrow merges into a resting one
    y = orbit(Configuration.from_word("<<"), T, 1)[-1]
    assert sum(has_arrow(y[i]) for i in range(-5, 5)) == 2
    y = orbit(Configuration.from_word("A<"), T, 1)[-1]
    assert sum(has_arrow(y[i]) for i in range(-5, 5)) == 1
