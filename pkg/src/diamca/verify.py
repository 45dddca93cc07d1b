"""Executable checks for every lemma-level claim, grouped into suites.

Each check receives the rule set to test (so a corrupted table can be
injected) and reports expected vs observed values.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from diamca import analysis, constructions, engine
from diamca.config import Configuration, Window, get, parse_config, shift
from diamca.fixtures import TABLES, display_table
from diamca.rules import RULES, RuleTable, blank_preserving
from diamca.symbols import A1, A3, EMPTY, PRODUCT, STACKED, TWO, Alphabet

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class VerifyResult:
    check_name: str
    status: str
    expected: str
    observed: str
    runtime: float
    repro: str = ""

    def line(self) -> str:
        out = f"{self.status.upper():4} {self.check_name} ({self.runtime:.2f}s)"
        if self.status == FAIL:
            out += f"\n     expected: {self.expected}\n     observed: {self.observed}\n     repro: {self.repro}"
        return out


# ----------------------------------------------------------------- sampling


def random_word(rng: random.Random, alphabet: Alphabet, length: int) -> tuple:
    return tuple(rng.choice(alphabet.symbols) for _ in range(length))


def random_configuration(rng: random.Random, alphabet: Alphabet, max_core: int = 8, max_tail: int = 3) -> Configuration:
    left = random_word(rng, alphabet, rng.randint(1, max_tail))
    right = random_word(rng, alphabet, rng.randint(1, max_tail))
    core = random_word(rng, alphabet, rng.randint(0, max_core))
    return Configuration(left, core, right, rng.randint(-5, 5))


def random_sealed_point(rng: random.Random, n: int) -> Configuration:
    """Arrow-free digits on [-n, n) with a blank at n (the extremal hypothesis)."""
    weights = [3, 3, 1, 1]  # favour blanks and zeros so arrows get through early
    cells = rng.choices(A1.symbols, weights=weights, k=2 * n) + [EMPTY]
    right = rng.choices(A1.symbols, k=rng.randint(1, 2))
    return Configuration((EMPTY,), cells, right, -n)


# ------------------------------------------------------------------- checks

Check = Callable[[dict, int], tuple]
CHECKS: dict[str, tuple[str, Check]] = {}


def check(name: str, suite: str):
    def register(fn: Check) -> Check:
        CHECKS[name] = (suite, fn)
        return fn

    return register


def _table_check(key: str) -> Check:
    def run(rules, seed=0):
        rule_name, text, rows = TABLES[key]
        x = parse_config(text)
        trace = engine.trace_table(x, rules[rule_name], Window(0, 5), 27)
        got = trace.words()
        bad = [t for t in range(28) if got[t] != rows[t]]
        return "28 rows equal", f"mismatched rows {bad}" if bad else "28 rows equal", not bad

    return run


check("verify:example-t1-block", "example-tables")(_table_check("t1-block"))
check("verify:example-t-block", "example-tables")(_table_check("t-block"))
check("verify:example-t-two-walls", "example-tables")(_table_check("t-two-walls"))


@check("verify:rule-t-display", "rules")
def _display(rules, seed=0):
    shown = display_table()
    t = rules["t"]
    bad = [k for k, v in shown.items() if v != {t(*k)}]
    return "64 entries equal", f"differs at {bad}" if bad else "64 entries equal", not bad


@check("verify:lemma-uno-l0", "periods")
def _uno_l0(rules, seed=0):
    r = engine.detect_eventual_period(Configuration.from_word("0"), rules["t1"], Window(0, 1))
    return "preperiod 0 period 3 confirmed", str(r), (r.preperiod, r.period, r.confirmed) == (0, 3, True)


@check("verify:lemma-uno-l1", "periods")
def _uno_l1(rules, seed=0):
    r = engine.detect_eventual_period(Configuration.from_word("00"), rules["t1"], Window(0, 2))
    return "preperiod 0 period 9 confirmed", str(r), (r.preperiod, r.period, r.confirmed) == (0, 9, True)


@check("verify:lemma-uno-dos-tres-l1", "periods")
def _phases_l1(rules, seed=0):
    col = engine.column_trace(Configuration.from_word("00"), rules["t1"], 0, 8)
    want = ("0",) * 3 + ("1",) * 3 + ("2",) * 3
    return "".join(want), "".join(col), col == want


@check("verify:lemma-3-unos", "periods")
def _tres_unos(rules, seed=0):
    a = engine.detect_eventual_period(Configuration.from_word("00"), rules["t1"], Window(0, 2))
    b = engine.detect_eventual_period(Configuration.from_word("000"), rules["t1"], Window(0, 3))
    return "periods 9 and 9", f"periods {a.period} and {b.period}", a.period == b.period == 9 and a.confirmed and b.confirmed


@check("verify:prop-lemaNpuertas-ladder", "periods")
def _ladder(rules, seed=0):
    bad = []
    for l in range(5):
        x = constructions.build_block_point(l)
        r = engine.detect_eventual_period(x, rules["t1"], Window(0, 2**l), 10 * 3 ** (l + 1))
        col = engine.column_trace(x, rules["t1"], 0, 3 ** (l + 1) - 1)
        want = tuple("0" * 3**l + "1" * 3**l + "2" * 3**l)
        if (r.preperiod, r.period, r.confirmed) != (0, 3 ** (l + 1), True) or col != want:
            bad.append(l)
    return "period 3^(l+1) with phase thirds, l=0..4", f"failing l: {bad}" if bad else "all l", not bad


@check("verify:prop-lemaNpuertas-sweep", "periods")
def _sweep(rules, seed=0):
    bad = []
    for l in range(4):
        for j in range(2**l):
            x = constructions.build_block_point(l, j)
            r = engine.detect_eventual_period(x, rules["t1"], Window(0, 2**l + j), 10 * 3 ** (l + 1))
            if (r.preperiod, r.period, r.confirmed) != (0, 3 ** (l + 1), True):
                bad.append((l, j, r.period))
    return "period 3^(l+1) for 0 <= j < 2^l, l <= 3", f"failing (l, j, period): {bad}" if bad else "all", not bad


@check("verify:prop-siempre-hay-una-salida", "periods")
def _exit(rules, seed=0):
    rng = random.Random(7 + 1000 * seed)
    bad = []
    for _ in range(100):
        head = "".join(rng.choice("012") for _ in range(rng.randint(0, 6)))
        tail = "".join(rng.choice("_012") for _ in range(rng.randint(0, 4)))
        x = Configuration.from_word(head + EMPTY + tail)
        j = len(head)
        for i in range(5):
            horizon = 4 * 3 ** (i + 1)
            col = engine.column_trace(x, rules["t1"], j - i, horizon)
            hits = sum(1 for n in range(1, horizon + 1) if col[n] in (EMPTY, TWO))
            if hits < horizon // 3 ** (i + 1):
                bad.append((head + EMPTY + tail, i, hits))
    return ">= floor(H/3^(i+1)) exits per column, i <= 4", f"violations {bad[:3]}" if bad else "none", not bad


@check("verify:remark-blocking-word", "periods")
def _blocking(rules, seed=0):
    rng = random.Random(11 + 1000 * seed)
    bad = 0
    for _ in range(100):
        w = "".join(rng.choice("_012") for _ in range(rng.randint(0, 6))) + EMPTY
        a = Configuration(random_word(rng, A1, 2), w + "".join(random_word(rng, A1, 4)), random_word(rng, A1, 2))
        b = Configuration(random_word(rng, A1, 2), w + "".join(random_word(rng, A1, 4)), random_word(rng, A1, 2))
        win = Window(0, len(w) - 1)
        ta = engine.trace_table(a, rules["t1"], win, 60).rows
        tb = engine.trace_table(b, rules["t1"], win, 60).rows
        bad += ta != tb
    return "0 divergent traces", f"{bad} divergent traces", bad == 0


def _pared_times(l: int, horizon: int) -> tuple:
    return tuple(t for t in range(horizon + 1) if t >= 2 * 3**l + 1 and (t - 2 * 3**l - 1) % 3 ** (l + 1) == 0)


@check("verify:lemma-pared-k1", "arrow-schedule")
def _pared_k1(rules, seed=0):
    x = constructions.build_wall_point(0)
    r = analysis.sensitivity_set_arrow_extremal(x, 2, 0, 60, rules["t"])
    ok = all(t % 3 == 0 and t >= 3 for t in r.times)
    return "times within {3k : k >= 1}", f"times {r.times[:8]}...", ok


@check("verify:lemma-pared-k-l", "arrow-schedule")
def _pared_kl(rules, seed=0):
    bad = []
    for l in range(4):
        horizon = 5 * 3 ** (l + 1)
        r = analysis.sensitivity_set_arrow_extremal(constructions.build_wall_point(l), 2**l + 1, 0, horizon, rules["t"])
        if r.times != _pared_times(l, horizon):
            bad.append(l)
    return "{k 3^(l+1) + 2 3^l + 1} exactly, l=0..3", f"failing l: {bad}" if bad else "all l", not bad


@check("verify:lemma-densidadpuertas", "density")
def _density(rules, seed=0):
    bad = []
    for l in range(4):
        horizon = 10 * 3 ** (l + 1)
        r = analysis.sensitivity_set_arrow_extremal(constructions.build_wall_point(l), 2**l + 1, 0, horizon, rules["t"])
        d = r.upper_density()
        if d > Fraction(1, 3 ** (l + 1)) + Fraction(2, horizon):
            bad.append((l, float(d)))
    r = analysis.sensitivity_set_arrow_extremal(constructions.build_wall_point(1), 3, 0, 10_000, rules["t"])
    d1 = r.upper_density()
    ok = not bad and abs(d1 - Fraction(1, 9)) <= Fraction(2, 1000)
    return "<= 3^-(l+1) + 2/H and l=1 within 0.002 of 1/9", f"violations {bad}, l=1 density {float(d1):.5f}", ok


@check("verify:lemma-densidadededosspuertas", "two-block")
def _two_block(rules, seed=0):
    problems = []
    for l in (1, 2, 3):
        x = constructions.build_two_block_point(l)
        m = constructions.two_block_radius(l)
        c = 2 ** (l - 1) + 1
        lag = 2 * 3 ** (l - 1)
        horizon = 10 * 3 ** (l + 1)
        sets = {i: analysis.sensitivity_set_arrow_extremal(x, m, i, horizon, rules["t"]).times for i in range(c + 1)}
        if tuple(t + lag for t in sets[c] if t + lag <= horizon) != sets[0]:
            problems.append((l, "shift"))
        dc = analysis.upper_density_finite(sets[c], horizon)
        for i in range(1, c):
            if analysis.upper_density_finite(sets[i], horizon) > (lag + 1) * dc:
                problems.append((l, "factor", i))
        if abs(analysis.upper_density_finite(sets[0], horizon) - dc) > Fraction(2, horizon):
            problems.append((l, "equal-density"))
    return "shift identity, factor inequality, equal densities for l=1..3", f"problems {problems}" if problems else "all hold", not problems


def oracle_instances(count: int = 60, seed: int = 3):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, 4)
        depth = rng.randint(1, min(6, 10 - n))
        horizon = rng.randint(0, depth)
        j = rng.randint(-n, n)
        out.append((random_sealed_point(rng, n), n, j, horizon, depth))
    return out


@check("verify:remark-characS-oracle", "oracle")
def _oracle(rules, seed=0):
    bad = []
    instances = oracle_instances(seed=3 + 1000 * seed)
    nonempty = 0
    for x, n, j, horizon, depth in instances:
        a = analysis.sensitivity_set_bruteforce(x, n, [j], horizon, depth, rules["t"])
        b = analysis.sensitivity_set_arrow_extremal(x, n, j, horizon, rules["t"])
        nonempty += bool(a.times)
        if a.times != b.times:
            bad.append((str(x), n, j, horizon, depth))
    return f"{len(instances)} identical instances", f"{len(bad)} mismatches ({nonempty} nonempty)" + (f": {bad[:2]}" if bad else ""), not bad


def first_divergence(x: Configuration, y: Configuration, rule: RuleTable, column: int, horizon: int) -> int | None:
    for t in range(horizon + 1):
        if get(x, column) != get(y, column):
            return t
        x = engine.step(x, rule).with_left_tail(column, x.left)
        y = engine.step(y, rule).with_left_tail(column, y.left)
    return None


@check("verify:prop-ningunpunto-m-e-p", "no-equicontinuity")
def _no_eq(rules, seed=0):
    rng = random.Random(5 + 1000 * seed)
    failures = []
    for _ in range(100):
        w = random_word(rng, PRODUCT, rng.choice([1, 3, 5, 7, 9]))
        x, y = constructions.build_divergence_pair(w)
        t = first_divergence(x, y, rules["t"], 0, 10_000)
        if t is None or t < len(w) // 2:
            failures.append("".join(w))
    return "100/100 pairs separate at column 0", f"{100 - len(failures)}/100" + (f", failing {failures[:3]}" if failures else ""), not failures


@check("verify:prop-punto-d-m-e", "certificate")
def _certificate(rules, seed=0):
    horizon = 10_000
    slack = Fraction(2, horizon)
    notes = []
    ok = True
    n0 = constructions.threshold_radius(0)
    cert = analysis.diam_mean_certificate(
        constructions.build_cascade_point(constructions.CascadeSpec("", constructions.threshold_level(0) + 1)),
        0, n0, horizon, rules["t"], slack=slack)
    ok &= cert.passed
    notes.append(f"m=0 at threshold radius {n0}: {cert.passed}")
    for m in (0, 1, 2):
        spec, cert = constructions.search_cascade_depth(m, horizon, slack=slack)
        ok &= cert is not None
        notes.append(f"m={m}: depth {spec.depth if spec else None}")
    return "cascade certificate passes for m=0,1,2", "; ".join(notes), ok


@check("verify:lemma-palabra-S-finito", "ts-obstruction")
def _ts(rules, seed=0):
    rng = random.Random(9 + 1000 * seed)
    failures = []
    for _ in range(20):
        w = ("_b",) + random_word(rng, STACKED, rng.randint(0, 5))
        x, y = constructions.build_ts_pair(w, rules["ts"])
        onset = first_divergence(x, y, rules["ts"], 0, 5_000)
        if onset is None:
            failures.append(("no onset", w))
            continue
        a, b = x, y
        for t in range(onset + 501):
            if t > onset and get(a, 0) == get(b, 0):
                failures.append(("rejoined", w, t))
                break
            a = engine.step(a, rules["ts"]).with_left_tail(0, a.left)
            b = engine.step(b, rules["ts"]).with_left_tail(0, b.left)
    return "20/20 pairs differ on [N+1, N+500]", f"{20 - len(failures)}/20" + (f": {failures[:2]}" if failures else ""), not failures


@check("verify:thm-2-lifted-certificate", "ts-obstruction")
def _ts_cert(rules, seed=0):
    horizon = 10_000
    notes = []
    ok = True
    for m in (0, 1):
        spec, _ = constructions.search_cascade_depth(m, horizon, slack=Fraction(2, horizon))
        x = constructions.lift(constructions.build_cascade_point(spec))
        n = spec.closing_blank(spec.depth - 1)
        cert = analysis.diam_mean_certificate(x, m, n, horizon, rules["ts"], slack=Fraction(2, horizon))
        ok &= cert.passed
        notes.append(f"m={m} depth {spec.depth}: {cert.passed}")
    return "lifted cascade passes at m=0,1", "; ".join(notes), ok


_STRUCT_ALPHABETS = {"t1": A1, "t": PRODUCT, "t3": A3, "ts": STACKED}


@check("verify:shift-commutation", "structural")
def _commute(rules, seed=0):
    rng = random.Random(13 + 1000 * seed)
    bad = []
    for name, alpha in _STRUCT_ALPHABETS.items():
        for _ in range(1000):
            x = random_configuration(rng, alpha)
            if engine.step(shift(x), rules[name]) != shift(engine.step(x, rules[name])):
                bad.append((name, str(x)))
    return "4000/4000 commute", f"{4000 - len(bad)}/4000", not bad


@check("verify:blank-preservation", "structural")
def _blank(rules, seed=0):
    bad = [n for n in ("t1", "t", "ts") if not blank_preserving(rules[n])]
    return "t1, t, ts preserve blanks", f"violating: {bad}" if bad else "all", not bad


@check("verify:dependence-cone", "structural")
def _cone(rules, seed=0):
    rng = random.Random(17 + 1000 * seed)
    bad = []
    for name, alpha in _STRUCT_ALPHABETS.items():
        for _ in range(250):
            x = random_configuration(rng, alpha)
            j, t = rng.randint(-4, 4), rng.randint(0, 6)
            cone = engine.dependence_cone(j, t)
            k = cone.hi + 1 if rng.random() < 0.5 else cone.lo - 1
            old = get(x, k)
            new = rng.choice([s for s in alpha.symbols if s != old])
            y = _set_cell(x, k, new)
            if engine.orbit(x, rules[name], t)[-1][j] != engine.orbit(y, rules[name], t)[-1][j]:
                bad.append((name, str(x), j, t, k))
    return "1000/1000 unaffected", f"{1000 - len(bad)}/1000", not bad


def _set_cell(x: Configuration, k: int, value) -> Configuration:
    lo, hi = min(x.origin, k), max(x.end, k + 1)
    cells = [get(x, i) for i in range(lo, hi)]
    cells[k - lo] = value
    return Configuration(x.left_at(lo), cells, x.right_at(hi), lo)


@check("verify:sj-monotonicity", "structural")
def _mono(rules, seed=0):
    rng = random.Random(19 + 1000 * seed)
    bad = []
    for _ in range(25):
        n = rng.randint(1, 3)
        depth = rng.randint(2, 4)
        x = random_configuration(rng, PRODUCT, max_core=6)
        j = rng.randint(-n, n)
        horizon = depth - 1
        small = analysis.sensitivity_set_bruteforce(x, n + 1, [j], horizon, depth, rules["t"]).times
        big = analysis.sensitivity_set_bruteforce(x, n, [j], horizon, depth, rules["t"]).times
        wide = analysis.sensitivity_set_bruteforce(x, n, [j, -j, 0], horizon, depth, rules["t"]).times
        if not set(small) <= set(big) or not set(big) <= set(wide):
            bad.append((str(x), n, j))
    return "S_J(x,n+1) <= S_J(x,n) <= S_J'(x,n)", f"{len(bad)} violations", not bad


SUITES = sorted({suite for suite, _ in CHECKS.values()})


def run_checks(suite: str = "all", rules: dict | None = None, only: str | None = None, repro_flags: str = "",
               seed: int = 0) -> list[VerifyResult]:
    if rules is None:
        rules = RULES
    if suite != "all" and suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; known: all, {', '.join(SUITES)}")
    results = []
    for name, (s, fn) in CHECKS.items():
        if only is not None and name != only:
            continue
        if suite != "all" and s != suite:
            continue
        t0 = time.perf_counter()
        try:
            expected, observed, ok = fn(rules, seed)
            status = PASS if ok else FAIL
        except Exception as exc:  # a corrupted rule can break hypotheses
            expected, observed, status = "no error", f"{type(exc).__name__}: {exc}", FAIL
        repro = f"ca --seed {seed} verify --check {name}{repro_flags}"
        results.append(VerifyResult(name, status, str(expected), str(observed), time.perf_counter() - t0, repro))
    return results
