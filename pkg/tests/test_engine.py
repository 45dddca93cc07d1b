import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ALPHABET_OF, configurations
from diamca.config import Configuration, Window, get, parse_config, shift
from diamca.engine import (
    PeriodReport,
    _minimize,
    column_trace,
    default_horizon,
    dependence_cone,
    detect_eventual_period,
    orbit,
    render_trace,
    step,
    trace_table,
)
from diamca.rules import RULES, T, T1, TS
from diamca.symbols import A1, PRODUCT

rule_and_config = st.sampled_from(sorted(RULES)).flatmap(
    lambda name: st.tuples(st.just(RULES[name]), configurations(ALPHABET_OF[name]))
)


@settings(max_examples=300, deadline=None)
@given(rule_and_config, st.integers(-15, 15))
def test_step_is_local_rule(case, i):
    rule, x = case
    assert get(step(x, rule), i) == rule(get(x, i), get(x, i + 1))


@settings(max_examples=300, deadline=None)
@given(rule_and_config)
def test_step_commutes_with_shift(case):
    rule, x = case
    assert step(shift(x), rule) == shift(step(x, rule))


@settings(max_examples=200, deadline=None)
@given(rule_and_config, st.integers(-4, 4), st.integers(0, 5), st.data())
def test_dependence_cone(case, j, t, data):
    rule, x = case
    cone = dependence_cone(j, t)
    k = data.draw(st.sampled_from([cone.lo - 1, cone.hi + 1, cone.hi + 3]))
    sym = data.draw(st.sampled_from(rule.alphabet.symbols))
    y = x.with_right_tail(k - 1, (sym,)) if k > cone.hi else x.with_left_tail(k + 1, (sym,))
    assert orbit(x, rule, t)[-1][j] == orbit(y, rule, t)[-1][j]


def test_uniform_fixed_points():
    for s in "_012":
        x = Configuration.uniform(s)
        y = step(x, T1)
        assert y == Configuration.uniform({"_": "_", "0": "0", "1": "1", "2": "0"}[s])


def test_trace_rendering():
    x = parse_config("(_)|_0000_|(_)", A1)
    text = render_trace(trace_table(x, T1, Window(0, 5), 27), A1)
    lines = text.splitlines()
    assert lines[0] == "# rule t1  alphabet A1  window [0,5]"
    assert len(lines) == 29
    assert lines[1] == "T^0   ·0000·" and lines[-1].startswith("T^27  ")
    ascii_text = render_trace(trace_table(x, T1, Window(0, 5), 2), A1, ascii_only=True)
    assert ascii_text.splitlines()[2] == "T^1  _0001_"


def test_trace_csv():
    x = parse_config("(_)|_0|(_)", A1)
    text = render_trace(trace_table(x, T1, Window(0, 1), 2), A1, fmt="csv", ascii_only=True)
    assert text == "t,0,1\n0,_,0\n1,_,1\n2,_,2\n"


def test_stacked_trace_has_separators():
    x = parse_config("(_a)|_b 0a <a|(_a)", "AS")
    line = render_trace(trace_table(x, TS, Window(0, 2), 1), None).splitlines()[1]
    assert line.endswith("_b 0a <a")


@pytest.mark.parametrize("word,period", [("0", 3), ("00", 9), ("000", 9), ("0000", 27), ("1", 3), ("", 1)])
def test_period_examples(word, period):
    r = detect_eventual_period(Configuration.from_word(word), T1, Window(0, max(0, len(word) - 1)))
    assert (r.preperiod, r.period, r.confirmed) == (0, period, True)


def test_period_report_text():
    assert str(PeriodReport(0, 3, True, 10)) == "preperiod 0 period 3 confirmed"


def test_period_with_preperiod():
    # a lone arrow on an Empty background passes column 0 once
    r = detect_eventual_period(Configuration.from_word("<", start=3), T, Window(0, 0), 100)
    assert r.confirmed and r.period == 1 and r.preperiod == 4


def test_period_unconfirmed_respects_horizon():
    x = Configuration.from_word("0" * 8)
    r = detect_eventual_period(x, T1, Window(0, 7), 50)
    assert not r.confirmed and r.horizon == 50


def test_env_default_horizon(monkeypatch):
    monkeypatch.setenv("CA_DEFAULT_HORIZON", "123")
    assert default_horizon() == 123


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=6), st.lists(st.integers(0, 2), min_size=1, max_size=6), st.integers(1, 3))
def test_minimize(pre, cycle, reps):
    seq = pre + cycle * (reps + 2)
    q, p = _minimize(seq, len(pre), len(cycle) * reps)
    assert q <= len(pre) and len(cycle) % p == 0
    assert all(seq[k] == seq[k + p] for k in range(q, len(seq) - p))
    if q > 0:
        assert seq[q - 1] != seq[q - 1 + p]


@settings(max_examples=60, deadline=None)
@given(configurations(A1, max_core=6))
def test_period_certificate_is_sound(x):
    r = detect_eventual_period(x, T1, Window(0, 1), 2000)
    assert r.confirmed
    col = [tuple(y[i] for i in (0, 1)) for y in orbit(x, T1, r.preperiod + 3 * r.period)]
    assert all(col[k] == col[k + r.period] for k in range(r.preperiod, len(col) - r.period))


def test_column_trace():
    assert column_trace(Configuration.from_word("0"), T1, 0, 5) == tuple("012012")
