"""Sensitivity sets, finite-horizon upper densities and diam-mean certificates."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from diamca.config import Configuration, Window, get, window_word
from diamca.engine import step
from diamca.rules import T, TS, RuleTable
from diamca.symbols import ARROW, EMPTY, STACKED, bottom, layer1, layer2, top

BRUTE = "brute-force"
EXTREMAL = "arrow-extremal"


class HypothesisError(ValueError):
    """A configuration does not meet the hypothesis an operation relies on."""


@dataclass(frozen=True)
class SensitivityReport:
    x: Configuration
    n: int
    columns: frozenset
    horizon: int
    times: tuple
    method: str

    @property
    def density(self) -> Fraction:
        return Fraction(sum(1 for t in self.times if t < self.horizon), self.horizon)

    def upper_density(self) -> Fraction:
        return upper_density_finite(self.times, self.horizon)


# ------------------------------------------------------------------ the ball


def ball_completions(
    x: Configuration,
    n: int,
    suffix_depth: int,
    alphabet=None,
    tail: tuple | None = None,
) -> Iterator[Configuration]:
    """Points of B_n(x) with cells (n, n+suffix_depth] enumerated.

    Cells left of -n keep x's values and cells beyond n+suffix_depth repeat
    ``tail`` (the alphabet blank by default).  Within ``suffix_depth`` steps no
    column >= -n can see the difference between this slice and the full ball.
    """
    if suffix_depth < 0:
        raise ValueError("suffix_depth must be >= 0")
    if alphabet is None:
        alphabet = _alphabet_of(x)
    if tail is None:
        tail = (alphabet.blank,)
    lo = min(x.origin, -n)
    fixed = window_word(x, Window(lo, n))
    left = x.left_at(lo)
    for suffix in itertools.product(alphabet.symbols, repeat=suffix_depth):
        yield Configuration(left, fixed + suffix, tail, lo)


def _alphabet_of(x: Configuration):
    from diamca.symbols import PRODUCT

    # A1 words are also product words; pass alphabet=A1 explicitly for T1
    return STACKED if len(x.right[0]) > 1 else PRODUCT


def _completion_array(x: Configuration, n: int, suffix_depth: int, lo: int, hi: int, rule: RuleTable,
                      first: int | None = None) -> np.ndarray:
    """All completions restricted to cells [lo, hi], as alphabet indices.

    ``first`` pins the first enumerated cell (used to split work across jobs).
    """
    alpha = rule.alphabet
    idx = alpha.index()
    k = len(alpha)
    fixed = np.array([idx[get(x, i)] for i in range(lo, n + 1)], dtype=np.int8)
    depth = suffix_depth
    if first is None:
        codes = np.arange(k**depth, dtype=np.int64)
    else:
        codes = first * k ** (depth - 1) + np.arange(k ** (depth - 1), dtype=np.int64)
    digits = np.empty((codes.size, depth), dtype=np.int8)
    rem = codes
    for c in range(depth - 1, -1, -1):
        digits[:, c] = rem % k
        rem = rem // k
    arr = np.empty((codes.size, len(fixed) + depth), dtype=np.int8)
    arr[:, : len(fixed)] = fixed
    arr[:, len(fixed):] = digits
    return arr[:, : hi - lo + 1]


def _scan(args) -> tuple[np.ndarray, list]:
    """Per time t <= horizon: does some column in J vary across completions?

    Also returns one representative column value per time so chunks computed
    by separate workers can be merged.
    """
    x, n, columns, horizon, suffix_depth, rule, lo, hi, first = args
    table = rule.as_array()
    arr = _completion_array(x, n, suffix_depth, lo, hi, rule, first)
    cols = [j - lo for j in sorted(columns)]
    diff = np.zeros(horizon + 1, dtype=bool)
    reps = []
    for t in range(horizon + 1):
        vals = arr[:, cols]
        diff[t] = bool(np.any(vals != vals[0]))
        reps.append(tuple(vals[0]))
        if t < horizon:
            arr = table[arr[:, :-1], arr[:, 1:]]
    return diff, reps


def sensitivity_set_bruteforce(
    x: Configuration,
    n: int,
    columns: Iterable[int],
    horizon: int,
    suffix_depth: int,
    rule: RuleTable = T,
    jobs: int = 1,
) -> SensitivityReport:
    """S_J(x, n) within [0, horizon] by exhaustive enumeration of the cone."""
    columns = frozenset(columns)
    if not columns:
        return SensitivityReport(x, n, columns, horizon, (), BRUTE)
    lo, hi = min(min(columns), -n), max(columns) + horizon
    if hi > n + suffix_depth:
        raise ValueError("horizon exceeds enumerated dependence cone")
    if suffix_depth == 0:
        return SensitivityReport(x, n, columns, horizon, (), BRUTE)
    if jobs <= 1:
        diff, _ = _scan((x, n, columns, horizon, suffix_depth, rule, lo, hi, None))
    else:
        # split on the first enumerated cell; a column varies overall iff it
        # varies inside a chunk or the chunks' representatives disagree
        k = len(rule.alphabet)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan, [(x, n, columns, horizon, suffix_depth, rule, lo, hi, f) for f in range(k)]))
        diff = np.zeros(horizon + 1, dtype=bool)
        for d, _ in parts:
            diff |= d
        for t in range(horizon + 1):
            diff[t] |= len({reps[t] for _, reps in parts}) > 1
    times = tuple(int(t) for t in np.flatnonzero(diff))
    return SensitivityReport(x, n, columns, horizon, times, BRUTE)


# ------------------------------------------------------- arrow-extremal oracle


def _top_layer(x: Configuration) -> Configuration:
    if len(x.right[0]) == 1:
        return x
    return Configuration(map(top, x.left), map(top, x.core), map(top, x.right), x.origin)


def check_extremal_hypothesis(x: Configuration, n: int) -> None:
    """No arrows on [-n, n] and a blank digit at column n."""
    for i in range(-n, n + 1):
        if layer2(get(x, i)) == ARROW:
            raise HypothesisError(f"arrow at column {i} inside [-{n}, {n}]")
    if layer1(get(x, n)) != EMPTY:
        raise HypothesisError(f"column {n} does not carry a blank digit")


def arrow_times(x: Configuration, columns: Iterable[int], horizon: int, rule: RuleTable = T) -> dict[int, tuple]:
    """Times t <= horizon at which T^t x carries an arrow, per column."""
    columns = sorted(set(columns))
    hits = {j: [] for j in columns}
    lo = columns[0] if columns else 0
    y = x
    for t in range(horizon + 1):
        for j in columns:
            if layer2(get(y, j)) == ARROW:
                hits[j].append(t)
        if t < horizon:
            # nothing left of the leftmost column can influence it
            y = step(y, rule).with_left_tail(lo, x.left)
    return {j: tuple(v) for j, v in hits.items()}


def extremal_point(x: Configuration, n: int) -> Configuration:
    """x on (-inf, n] followed by the all-arrow tail."""
    return x.with_right_tail(n, (ARROW,))


def sensitivity_set_arrow_extremal(
    x: Configuration, n: int, j: int | Iterable[int], horizon: int, rule: RuleTable = T
) -> SensitivityReport:
    """S_{j}(x, n) from one orbit, valid under :func:`check_extremal_hypothesis`.

    The digit layer on [-n, n] is sealed by the blank at n, so two points of
    the ball can only disagree through arrows.  Arrow presence is monotone in
    the initial arrow set, hence the all-arrow tail realises every possible
    arrival while the arrow-free completion realises none.
    """
    x = _top_layer(x)
    check_extremal_hypothesis(x, n)
    columns = frozenset([j] if isinstance(j, int) else j)
    for c in columns:
        if abs(c) > n:
            raise HypothesisError(f"column {c} lies outside [-{n}, {n}]")
    hits = arrow_times(extremal_point(x, n), columns, horizon, rule)
    times = tuple(sorted(set().union(*hits.values()))) if hits else ()
    return SensitivityReport(x, n, columns, horizon, times, EXTREMAL)


# ------------------------------------------------------------------ densities


def upper_density_finite(times: Iterable[int], horizon: int) -> Fraction:
    """max over N in [horizon/2, horizon] of #(S cap [0, N)) / N."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    marks = np.zeros(horizon + 1, dtype=np.int64)
    for t in times:
        if 0 <= t < horizon:
            marks[t + 1] += 1
    counts = np.cumsum(marks)  # counts[N] = #(S cap [0, N))
    best = Fraction(0)
    for N in range(max(1, math.ceil(horizon / 2)), horizon + 1):
        c = int(counts[N])
        if c * best.denominator > best.numerator * N:
            best = Fraction(c, N)
    return best


# --------------------------------------------------------------- certificate


@dataclass
class DiamMeanCertificate:
    x: Configuration
    m: int
    m_prime: int
    horizon: int
    per_column: dict[int, Fraction] = field(default_factory=dict)
    slack: Fraction = Fraction(0)
    left_columns: str = "extremal"

    @property
    def threshold(self) -> Fraction:
        return Fraction(1, 2 ** (self.m + 2))

    @property
    def converse_threshold(self) -> Fraction:
        return Fraction(1, 2**self.m)

    @property
    def passed(self) -> bool:
        return all(d <= self.threshold + self.slack for d in self.per_column.values())

    @property
    def margin(self) -> Fraction:
        return self.threshold - max(self.per_column.values(), default=Fraction(0))

    @property
    def converse_margin(self) -> Fraction:
        return self.converse_threshold - max(self.per_column.values(), default=Fraction(0))

    def to_text(self) -> str:
        lines = [
            f"config: {self.x}",
            f"m: {self.m}",
            f"mprime: {self.m_prime}",
            f"horizon: {self.horizon}",
            f"threshold: {self.threshold}",
            f"slack: {self.slack}",
            f"left_columns: {self.left_columns}",
        ]
        for j, d in sorted(self.per_column.items()):
            lines.append(f"density[{j}]: {d} ({float(d):.6f})")
        lines.append(f"margin: {float(self.margin):.6f}")
        lines.append(f"converse_margin: {float(self.converse_margin):.6f}")
        lines.append(f"passed: {str(self.passed).lower()}")
        return "\n".join(lines) + "\n"


def _reduce_stacked(x: Configuration, n: int) -> Configuration:
    """Top layer of a stacked point whose bottom is constant 'a' on [-n, n].

    'a' is fixed by both branches of the stacked rule and the bottom layer
    never reads neighbours, so the sensitivity sets coincide with the top
    layer's under T.
    """
    for i in range(-n, n + 1):
        if bottom(get(x, i)) != "a":
            raise HypothesisError(f"bottom layer at column {i} is not 'a'")
    return _top_layer(x)


def diam_mean_certificate(
    x: Configuration,
    m: int,
    m_prime: int,
    horizon: int,
    rule: RuleTable = T,
    left_columns: str = "extremal",
    slack: Fraction | None = None,
) -> DiamMeanCertificate:
    """Finite-horizon check that D(S_{-j,j}(x, m')) <= 2^-(m+2) for j <= m+1.

    ``left_columns="extremal"`` computes the negative columns from the same
    orbit (exact under the sealing hypothesis); ``"bounded-by-right"`` bounds
    D(S_{-j}) by D(S_{0}) and reports D(S_j) + D(S_0) for the pair.
    """
    if rule is TS or rule.alphabet is STACKED:
        x = _reduce_stacked(x, m_prime)
        rule = T
    x = _top_layer(x)
    check_extremal_hypothesis(x, m_prime)
    if m + 1 > m_prime:
        raise HypothesisError(f"m' = {m_prime} must cover columns up to {m + 1}")
    cols = range(-(m + 1), m + 2) if left_columns == "extremal" else range(0, m + 2)
    hits = arrow_times(extremal_point(x, m_prime), cols, horizon, rule)
    cert = DiamMeanCertificate(x, m, m_prime, horizon, slack=slack if slack is not None else Fraction(0),
                               left_columns=left_columns)
    d0 = upper_density_finite(hits[0], horizon)
    for j in range(m + 2):
        if left_columns == "extremal":
            times = set(hits[j]) | set(hits[-j])
            cert.per_column[j] = upper_density_finite(times, horizon)
        elif left_columns == "bounded-by-right":
            dj = upper_density_finite(hits[j], horizon)
            cert.per_column[j] = dj if j == 0 else min(Fraction(1), dj + d0)
        else:
            raise ValueError(f"unknown left_columns mode {left_columns!r}")
    return cert


# ------------------------------------------------------------ diameter profile


@dataclass(frozen=True)
class DiameterProfile:
    diameters: tuple
    running_mean: tuple
    floor: Fraction


def ball_diameter_profile(
    x: Configuration, m_prime: int, horizon: int, suffix_depth: int, rule: RuleTable = T
) -> DiameterProfile:
    """diam(T^i B_{m'}(x)) for i <= horizon over the enumerated ball.

    Only columns in the determined cone are compared; when none of them
    differ, or the first difference lies beyond the resolution, the entry is
    the floor 2^-(m'+horizon), read as the interval [0, floor].
    """
    if horizon > suffix_depth:
        raise ValueError("horizon exceeds enumerated dependence cone")
    floor = Fraction(1, 2 ** (m_prime + horizon))
    lo, hi = -m_prime, m_prime + suffix_depth
    table = rule.as_array()
    arr = _completion_array(x, m_prime, suffix_depth, lo, hi, rule)
    diams = []
    for i in range(horizon + 1):
        varying = np.flatnonzero(np.any(arr != arr[0], axis=0)) + lo
        d = floor
        if varying.size:
            nearest = int(np.min(np.abs(varying)))
            if nearest < m_prime + horizon:
                d = Fraction(1, 2**nearest)
        diams.append(d)
        if i < horizon:
            arr = table[arr[:, :-1], arr[:, 1:]]
    running = []
    total = Fraction(0)
    for i, d in enumerate(diams):
        total += d
        running.append(total / (i + 1))
    return DiameterProfile(tuple(diams), tuple(running), floor)
