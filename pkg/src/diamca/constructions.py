"""Builders for the named points and witness pairs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from diamca.analysis import HypothesisError, check_extremal_hypothesis, diam_mean_certificate
from diamca.config import Configuration, Window, window_word
from diamca.engine import step
from diamca.rules import TS, RuleTable, T
from diamca.symbols import ARROW, EMPTY, ZERO, has_arrow, top


def build_block_point(l: int, j: int = 0) -> Configuration:
    """Zero^(2^l + j) at [0, 2^l + j) on a blank background."""
    if l < 0 or not 0 <= j <= 2**l:
        raise ValueError(f"need l >= 0 and 0 <= j <= 2^l, got l={l}, j={j}")
    return Configuration.from_word(ZERO * (2**l + j))


def build_wall_point(l: int) -> Configuration:
    """Blank, Zero^(2^l), blank at [0, 2^l + 1]."""
    return Configuration.from_word(EMPTY + ZERO * 2**l + EMPTY)


def build_two_block_point(l: int) -> Configuration:
    """Blank Zero^(2^(l-1)) blank Zero^(2^l) blank on [0, 2^l + 2^(l-1) + 2]."""
    if l < 1:
        raise ValueError("l must be >= 1")
    return Configuration.from_word(EMPTY + ZERO * 2 ** (l - 1) + EMPTY + ZERO * 2**l + EMPTY)


def two_block_radius(l: int) -> int:
    return 2**l + 2 ** (l - 1) + 2


@dataclass(frozen=True)
class CascadeSpec:
    prefix: str = ""
    depth: int = 1
    truncation_tail: str = EMPTY

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")

    @property
    def core(self) -> tuple:
        parts = [EMPTY]
        for i in range(self.depth):
            parts.append(ZERO * 2**i + EMPTY)
        return tuple(self.prefix) + tuple("".join(parts))

    def block_start(self, i: int) -> int:
        return len(self.prefix) + i + 2**i

    def closing_blank(self, i: int) -> int:
        """Index of the blank right after the block of length 2^i."""
        return len(self.prefix) + i + 2 ** (i + 1)


def build_cascade_point(spec: CascadeSpec) -> Configuration:
    """prefix . blank 0 blank 0^2 blank 0^4 ... 0^(2^(depth-1)) blank, then the tail."""
    return Configuration((EMPTY,), spec.core, (spec.truncation_tail,), 0)


def threshold_level(m: int, k: int = 0, max_level: int = 64) -> int | None:
    """Least l > 0 with k < 2^l and 2(3^(l-1) + 1) / 3^(l+1) <= 2^-(m+2).

    The left side decreases to 2/9, so no level exists once 2^-(m+2) <= 2/9,
    i.e. for every m >= 1; ``None`` is returned then.
    """
    target = Fraction(1, 2 ** (m + 2))
    for l in range(1, max_level + 1):
        if k < 2**l and Fraction(2 * (3 ** (l - 1) + 1), 3 ** (l + 1)) <= target:
            return l
    return None


def threshold_radius(m: int, k: int = 0) -> int | None:
    """Ball radius for the level from :func:`threshold_level`.

    The radius reaches the blank closing block ``l``, so the whole block is
    pinned by the ball.
    """
    l = threshold_level(m, k)
    if l is None:
        return None
    return k + l + 2 ** (l + 1)


def certificate_radii(x: Configuration, lo: int, hi: int):
    """Radii n in [lo, hi] satisfying the arrow-extremal hypothesis."""
    for n in range(lo, hi + 1):
        try:
            check_extremal_hypothesis(x, n)
        except HypothesisError:
            continue
        yield n


def search_mprime(x: Configuration, m: int, horizon: int, max_radius: int | None = None, rule: RuleTable = T,
                  slack: Fraction | None = None):
    """Smallest admissible m' whose certificate passes, with that certificate."""
    if max_radius is None:
        max_radius = x.end + 1
    layer = x
    if rule is TS:
        layer = Configuration(map(top, x.left), map(top, x.core), map(top, x.right), x.origin)
    for n in certificate_radii(layer, m + 1, max_radius):
        cert = diam_mean_certificate(x, m, n, horizon, rule=rule, slack=slack)
        if cert.passed:
            return n, cert
    return None, None


def search_cascade_depth(m: int, horizon: int, prefix: str = "", max_depth: int = 8, slack: Fraction | None = None):
    """Least cascade depth L whose closing blank certifies resolution m."""
    for depth in range(1, max_depth + 1):
        spec = CascadeSpec(prefix, depth)
        x = build_cascade_point(spec)
        n = spec.closing_blank(depth - 1)
        if n < m + 1:
            continue
        cert = diam_mean_certificate(x, m, n, horizon, slack=slack)
        if cert.passed:
            return spec, cert
    return None, None


def build_divergence_pair(w) -> tuple[Configuration, Configuration]:
    """w on [-m, m] with blank tails, and with all-arrow tails."""
    w = tuple(w)
    if len(w) % 2 != 1:
        raise ValueError("word length must be odd")
    m = len(w) // 2
    x = Configuration((EMPTY,), w, (EMPTY,), -m)
    y = Configuration((ARROW,), w, (ARROW,), -m)
    return x, y


def lift(x: Configuration, bottom: str = "a") -> Configuration:
    """Stack a constant bottom layer under a product configuration."""
    return Configuration((s + bottom for s in x.left), (s + bottom for s in x.core), (s + bottom for s in x.right),
                         x.origin)


def flush_arrows(w, rule: RuleTable = TS, max_steps: int = 100_000) -> tuple[tuple, int]:
    """Evolve ``(_,a)^inf . w . (_,a)^inf`` until [0, |w|) carries no arrows.

    Returns the resulting word on [0, |w|) and the number of steps taken.
    """
    w = tuple(w)
    y = Configuration(("_a",), w, ("_a",), 0)
    span = Window(0, len(w) - 1)
    for t in range(max_steps + 1):
        word = window_word(y, span)
        if not any(has_arrow(top(s)) for s in word):
            return word, t
        y = step(y, rule)
    raise RuntimeError(f"arrows did not leave [0, {len(w)}) within {max_steps} steps")


def build_ts_pair(w, rule: RuleTable = TS) -> tuple[Configuration, Configuration]:
    """Stacked pair differing by one arrow just right of w.

    Arrows inside w are flushed first, so the only arrow that ever reaches
    column 0 is the added one.
    """
    w = tuple(w)
    if not w or w[0] != "_b":
        raise ValueError("w must start with the stacked symbol '_b'")
    word, _ = flush_arrows(w, rule)
    x = Configuration(("_a",), word + ("<a",), ("_a",), 0)
    y = Configuration(("_a",), word, ("_a",), 0)
    return x, y
