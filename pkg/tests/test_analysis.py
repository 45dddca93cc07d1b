from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diamca.analysis import (
    BRUTE,
    EXTREMAL,
    HypothesisError,
    ball_completions,
    ball_diameter_profile,
    check_extremal_hypothesis,
    diam_mean_certificate,
    sensitivity_set_arrow_extremal,
    sensitivity_set_bruteforce,
    upper_density_finite,
)
from diamca.config import Configuration, parse_config
from diamca.constructions import build_cascade_point, build_wall_point, CascadeSpec, lift
from diamca.engine import orbit
from diamca.rules import T, T1, TS
from diamca.symbols import A1, EMPTY
from diamca.verify import oracle_instances, random_sealed_point


def naive_sensitivity(x, n, columns, horizon, depth, rule, alphabet):
    seen = [set() for _ in range(horizon + 1)]
    for y in ball_completions(x, n, depth, alphabet):
        for t, z in enumerate(orbit(y, rule, horizon)):
            seen[t].add(tuple(z[j] for j in columns))
    return tuple(t for t in range(horizon + 1) if len(seen[t]) > 1)


def test_t1_all_empty_is_insensitive():
    x = Configuration.uniform(EMPTY)
    r = sensitivity_set_bruteforce(x, 2, [0], 6, 6, T1)
    assert r.times == () and r.method == BRUTE
    assert naive_sensitivity(x, 2, [0], 6, 6, T1, A1) == ()


def test_t1_zeros_cross_checked():
    x = Configuration.from_word("000", start=-1, right=("0",))
    r = sensitivity_set_bruteforce(x, 1, [0], 5, 5, T1)
    assert r.times == naive_sensitivity(x, 1, [0], 5, 5, T1, A1)
    assert r.times  # an unsealed zero run does feel the suffix


def test_brute_matches_naive_on_product():
    x = parse_config("(_)|_0_0|(_)@-2")
    assert sensitivity_set_bruteforce(x, 2, [0], 3, 3, T).times == naive_sensitivity(x, 2, [0], 3, 3, T, None)


def test_ball_completions_count_and_centre():
    x = Configuration.from_word("01", start=-1)
    ys = list(ball_completions(x, 1, 2, A1))
    assert len(ys) == 16
    assert all(y[-1] == "0" and y[0] == "1" and y[1] == "_" for y in ys)


def test_horizon_beyond_cone_rejected():
    with pytest.raises(ValueError, match="dependence cone"):
        sensitivity_set_bruteforce(Configuration.uniform("_"), 1, [0], 5, 3)


def test_jobs_merge_is_deterministic():
    x = parse_config("(_)|_00_|(_)@-1")
    a = sensitivity_set_bruteforce(x, 2, [0, 1], 5, 5, T, jobs=1)
    b = sensitivity_set_bruteforce(x, 2, [0, 1], 5, 5, T, jobs=3)
    assert a.times == b.times


@pytest.mark.parametrize("instance", oracle_instances(count=20, seed=101))
def test_oracle_equivalence(instance):
    x, n, j, horizon, depth = instance
    a = sensitivity_set_bruteforce(x, n, [j], horizon, depth)
    b = sensitivity_set_arrow_extremal(x, n, j, horizon)
    assert a.times == b.times and b.method == EXTREMAL


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32), st.data())
def test_monotone_in_n_and_j(n, seed, data):
    import random

    x = random_sealed_point(random.Random(seed), n + 1)
    depth = data.draw(st.integers(2, 4))
    horizon = depth - 1
    j = data.draw(st.integers(-n, n))
    outer = sensitivity_set_bruteforce(x, n + 1, [j], horizon, depth).times
    inner = sensitivity_set_bruteforce(x, n, [j], horizon, depth).times
    wider = sensitivity_set_bruteforce(x, n, [j, -n], horizon, depth).times
    assert set(outer) <= set(inner) <= set(wider)


def test_hypothesis_checks():
    with pytest.raises(HypothesisError, match="arrow"):
        check_extremal_hypothesis(parse_config("(_)|A_|(_)"), 1)
    with pytest.raises(HypothesisError, match="blank"):
        check_extremal_hypothesis(parse_config("(_)|_00|(_)"), 1)
    with pytest.raises(HypothesisError):
        sensitivity_set_arrow_extremal(build_wall_point(1), 3, 5, 10)


def test_upper_density_finite():
    assert upper_density_finite([], 10) == 0
    assert upper_density_finite(range(0, 100, 3), 99) == Fraction(18, 52)  # N = 52
    assert upper_density_finite([0], 1) == 1
    with pytest.raises(ValueError):
        upper_density_finite([], 0)


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(0, 200)), st.integers(1, 200))
def test_upper_density_bounds(times, horizon):
    d = upper_density_finite(times, horizon)
    assert 0 <= d <= 1
    assert d >= Fraction(sum(1 for t in times if t < horizon), horizon)


def test_wall_density_one_ninth():
    r = sensitivity_set_arrow_extremal(build_wall_point(1), 3, 0, 2000)
    assert abs(r.upper_density() - Fraction(1, 9)) <= Fraction(1, 1000)


def test_certificate_text_block():
    x = build_cascade_point(CascadeSpec("", 4))
    cert = diam_mean_certificate(x, 0, 19, 1000, slack=Fraction(2, 1000))
    text = cert.to_text()
    assert cert.passed and "passed: true" in text and "mprime: 19" in text
    assert cert.threshold == Fraction(1, 4) and cert.converse_threshold == 1
    assert cert.converse_margin > cert.margin


def test_certificate_bounded_by_right_is_weaker():
    x = build_cascade_point(CascadeSpec("", 4))
    exact = diam_mean_certificate(x, 1, 19, 2000)
    bound = diam_mean_certificate(x, 1, 19, 2000, left_columns="bounded-by-right")
    assert bound.left_columns == "bounded-by-right"
    assert all(bound.per_column[j] >= exact.per_column[j] for j in exact.per_column)


def test_certificate_requires_cover():
    with pytest.raises(HypothesisError):
        diam_mean_certificate(build_cascade_point(CascadeSpec("", 2)), 5, 5, 100)


def test_stacked_certificate_reduces_to_top():
    x = build_cascade_point(CascadeSpec("", 4))
    a = diam_mean_certificate(x, 1, 19, 1000)
    b = diam_mean_certificate(lift(x), 1, 19, 1000, rule=TS)
    assert a.per_column == b.per_column
    with pytest.raises(HypothesisError):
        diam_mean_certificate(lift(x, "b"), 1, 19, 1000, rule=TS)


def test_diameter_profile():
    x = build_wall_point(0)
    prof = ball_diameter_profile(x, 2, 4, 5)
    assert len(prof.diameters) == 5 and prof.floor == Fraction(1, 2**6)
    assert all(prof.floor <= d <= 1 for d in prof.diameters)
    with pytest.raises(ValueError):
        ball_diameter_profile(x, 2, 6, 5)
