"""Exact global stepping, orbit traces and eventual-period certificates."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

from diamca.config import Configuration, Window, get, window_word
from diamca.rules import RuleTable
from diamca.symbols import A1, EMPTY

DEFAULT_HORIZON = 10_000


def default_horizon() -> int:
    return int(os.environ.get("CA_DEFAULT_HORIZON", DEFAULT_HORIZON))


def step(x: Configuration, rule: RuleTable) -> Configuration:
    """Apply the one-sided radius-1 rule to every cell.

    Tail periods are preserved; the seam moves one cell left.
    """
    f = rule.table
    L, C, R = x.left, x.core, x.right
    p, q = len(L), len(R)
    left = tuple(f[L[k - 1], L[k]] for k in range(p))
    seq = (L[-1],) + C + (R[0],)
    core = tuple(f[seq[k], seq[k + 1]] for k in range(len(seq) - 1))
    right = tuple(f[R[k], R[(k + 1) % q]] for k in range(q))
    return Configuration(left, core, right, x.origin - 1)


def iterate(x: Configuration, rule: RuleTable) -> Iterator[Configuration]:
    """Endless orbit x, Tx, T^2x, ..."""
    while True:
        yield x
        x = step(x, rule)


def orbit(x: Configuration, rule: RuleTable, steps: int) -> list[Configuration]:
    if steps < 0:
        raise ValueError("steps must be >= 0")
    out = [x]
    for _ in range(steps):
        out.append(step(out[-1], rule))
    return out


@dataclass(frozen=True)
class OrbitTrace:
    rule: str
    window: Window
    rows: tuple[tuple, ...]

    @property
    def steps(self) -> int:
        return len(self.rows) - 1

    def words(self) -> list[str]:
        return ["".join(r) for r in self.rows]


def trace_table(x: Configuration, rule: RuleTable, window: Window, steps: int) -> OrbitTrace:
    rows = tuple(window_word(y, window) for y in orbit(x, rule, steps))
    return OrbitTrace(rule.name, window, rows)


def render_trace(trace: OrbitTrace, alphabet=None, fmt: str = "table", ascii_only: bool = False) -> str:
    """Table layout: a header naming rule/alphabet/window, then ``T^i`` rows."""
    glyph = (lambda s: alphabet.glyph(s, ascii_only)) if alphabet is not None else (lambda s: s)
    alpha_name = alphabet.name if alphabet is not None else "?"
    lines = []
    if fmt == "csv":
        cols = list(trace.window)
        lines.append(",".join(["t"] + [str(c) for c in cols]))
        for t, row in enumerate(trace.rows):
            lines.append(",".join([str(t)] + [glyph(s) for s in row]))
        return "\n".join(lines) + "\n"
    lines.append(f"# rule {trace.rule}  alphabet {alpha_name}  window {trace.window}")
    width = len(f"T^{trace.steps}")
    sep = " " if any(len(s) > 1 for row in trace.rows for s in row) else ""
    for t, row in enumerate(trace.rows):
        lines.append(f"{f'T^{t}':<{width}}  " + sep.join(glyph(s) for s in row))
    return "\n".join(lines) + "\n"


def dependence_cone(j: int, t: int) -> Window:
    """Cells that T^t x_j can depend on."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return Window(j, j + t)


def column_trace(x: Configuration, rule: RuleTable, j: int, steps: int) -> tuple:
    return tuple(get(y, j) for y in orbit(x, rule, steps))


@dataclass(frozen=True)
class PeriodReport:
    preperiod: int
    period: int
    confirmed: bool
    horizon: int

    def __str__(self) -> str:
        verdict = "confirmed" if self.confirmed else "unconfirmed"
        return f"preperiod {self.preperiod} period {self.period} {verdict}"


def _blocking_seal(x: Configuration, rule: RuleTable, hi: int) -> int | None:
    """Nearest A1-Empty cell at or right of ``hi`` for the pure odometer."""
    if rule.alphabet is not A1:
        return None
    for i in range(hi, max(hi, x.end) + len(x.right) + 1):
        if get(x, i) == EMPTY:
            return i
    return None


def _right_state(x: Configuration, lo: int) -> tuple:
    """Canonical description of the one-sided sequence x_[lo, inf)."""
    if x.end <= lo:
        return ((), x.right_at(lo))
    start = max(lo, x.origin)
    head = window_word(x, Window(lo, start - 1)) if start > lo else ()
    return (head + x.core[start - x.origin :], x.right)


def _minimize(seq: list, pre: int, period: int) -> tuple[int, int]:
    """Shrink an eventual (pre, period) of ``seq`` to the minimal pair.

    ``seq`` must contain at least ``pre + period`` entries and be genuinely
    periodic from ``pre`` with ``period``.
    """
    n = len(seq)

    def at(k):
        return seq[k] if k < n else seq[pre + (k - pre) % period]

    best = period
    for d in range(1, period + 1):
        if period % d == 0 and all(at(k + d) == at(k) for k in range(pre, pre + period)):
            best = d
            break
    q = pre
    while q > 0 and at(q - 1) == at(q - 1 + best):
        q -= 1
    return q, best


def detect_eventual_period(x: Configuration, rule: RuleTable, window: Window, max_horizon: int | None = None) -> PeriodReport:
    """Certify that the window's orbit is eventually periodic.

    Cycle detection runs on a state that determines all future window values:
    for the odometer the word up to the nearest blank at or right of the
    window (the blank blocks all influence from the right); otherwise the
    whole right half-line from ``window.lo``, which is finite because tails
    are spatially periodic.  A repeated state is an exact certificate.
    """
    if max_horizon is None:
        max_horizon = default_horizon()
    if max_horizon < 1:
        raise ValueError("max_horizon must be >= 1")
    seal = _blocking_seal(x, rule, window.hi)
    if seal is not None:
        ext = Window(window.lo, seal)

        def state(y):
            return window_word(y, ext)

    else:

        def state(y):
            return _right_state(y, window.lo)

    seen: dict = {}
    words: list = []
    y = x
    for n in range(max_horizon + 1):
        s = state(y)
        words.append(window_word(y, window))
        if s in seen:
            pre, period = _minimize(words[:-1], seen[s], n - seen[s])
            return PeriodReport(pre, period, True, n)
        seen[s] = n
        y = step(y, rule).with_left_tail(window.lo, x.left)
    pre, period = _best_effort(words)
    return PeriodReport(pre, period, False, max_horizon)


def _best_effort(words: list) -> tuple[int, int]:
    n = len(words)
    for p in range(1, n // 2 + 1):
        if all(words[k] == words[k + p] for k in range(n // 2, n - p)):
            q = n // 2
            while q > 0 and words[q - 1] == words[q - 1 + p]:
                q -= 1
            return q, p
    return n, 1
