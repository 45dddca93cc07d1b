"""Bi-infinite configurations with spatially periodic tails.

A configuration is ``leftTail^inf . core . rightTail^inf``: cells left of
``origin`` repeat ``left`` (with ``left[-1]`` at ``origin - 1``), the core
occupies ``[origin, origin + len(core))`` and the right tail repeats from the
first cell after the core.  Instances are always stored in canonical form, so
``==`` is equality of the denoted points.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from diamca.symbols import ALPHABETS, PRODUCT, Alphabet


class ConfigParseError(ValueError):
    """Raised for malformed configuration text; ``pos`` is the offending offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Window:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def __contains__(self, i: object) -> bool:
        return isinstance(i, int) and self.lo <= i <= self.hi

    @classmethod
    def parse(cls, text: str) -> "Window":
        lo, _, hi = text.partition(":")
        return cls(int(lo), int(hi))

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


def primitive_root(word: tuple) -> tuple:
    """Shortest u with word == u^k, via the KMP failure function."""
    n = len(word)
    fail = [0] * (n + 1)
    fail[0] = -1
    k = -1
    for i in range(n):
        while k >= 0 and word[k] != word[i]:
            k = fail[k]
        k += 1
        fail[i + 1] = k
    p = n - fail[n]
    return word[:p] if n % p == 0 else word


def _rotate(word: tuple, k: int) -> tuple:
    k %= len(word)
    return word[k:] + word[:k]


@dataclass(frozen=True, init=False)
class Configuration:
    left: tuple
    core: tuple
    right: tuple
    origin: int

    def __init__(self, left: Iterable, core: Iterable, right: Iterable, origin: int = 0):
        left, core, right = tuple(left), tuple(core), tuple(right)
        if not left or not right:
            raise ValueError("tails must be nonempty")
        left, core, right, origin = _canonical(left, core, right, origin)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "origin", origin)

    @classmethod
    def uniform(cls, symbol: str) -> "Configuration":
        return cls((symbol,), (), (symbol,))

    @classmethod
    def from_word(cls, word: Iterable, start: int = 0, left: Iterable = ("_",), right: Iterable = ("_",)) -> "Configuration":
        """``left^inf`` . word placed at ``start`` . ``right^inf``."""
        return cls(tuple(left), tuple(word), tuple(right), start)

    @property
    def end(self) -> int:
        """First index of the right tail region."""
        return self.origin + len(self.core)

    def __getitem__(self, i: int):
        return get(self, i)

    def with_right_tail(self, after: int, tail: Iterable) -> "Configuration":
        """Keep cells ``<= after`` and repeat ``tail`` from ``after + 1`` on."""
        lo = min(self.origin, after + 1)
        core = window_word(self, Window(lo, after)) if after >= lo else ()
        return Configuration(self.left_at(lo), core, tuple(tail), lo)

    def with_left_tail(self, before: int, tail: Iterable) -> "Configuration":
        """Keep cells ``>= before`` and repeat ``tail`` to the left of it."""
        start = max(self.end, before)
        core = window_word(self, Window(before, start - 1)) if start > before else ()
        return Configuration(tuple(tail), core, self.right_at(start), before)

    def left_at(self, seam: int) -> tuple:
        """Left tail word aligned so its last symbol sits at ``seam - 1``.

        Valid for any ``seam <= origin``.
        """
        return _rotate(self.left, seam - self.origin)

    def right_at(self, start: int) -> tuple:
        """Right tail word aligned so its first symbol sits at ``start >= end``."""
        return _rotate(self.right, start - self.end)

    def __str__(self) -> str:
        return format_config(self)


def _canonical(left: tuple, core: tuple, right: tuple, origin: int):
    left = primitive_root(left)
    right = primitive_root(right)
    lo = 0
    while lo < len(core) and core[lo] == left[0]:
        left = _rotate(left, 1)
        lo += 1
    hi = len(core)
    while hi > lo and core[hi - 1] == right[-1]:
        right = _rotate(right, -1)
        hi -= 1
    origin += lo
    core = core[lo:hi]
    if core:
        return left, core, right, origin
    if left == right:
        # fully periodic point: pin the seam at 0
        p = len(right)
        word = tuple(right[(k - origin) % p] for k in range(p))
        return word, (), word, 0
    # extend the right tail region leftwards as far as it goes; terminates
    # because two distinct primitive words cannot agree on a full lcm-window
    while left[-1] == right[-1]:
        left = _rotate(left, -1)
        right = _rotate(right, -1)
        origin -= 1
    return left, (), right, origin


def get(x: Configuration, i: int):
    if i < x.origin:
        return x.left[(i - x.origin) % len(x.left)]
    k = i - x.origin
    if k < len(x.core):
        return x.core[k]
    return x.right[(k - len(x.core)) % len(x.right)]


def window_word(x: Configuration, w: Window) -> tuple:
    return tuple(get(x, i) for i in range(w.lo, w.hi + 1))


def cantor_distance(x: Configuration, y: Configuration, max_depth: int) -> Fraction:
    """2^-i for the least |j| <= max_depth with x_j != y_j, else 0.

    A zero result only certifies ``d(x, y) <= 2^-max_depth``; the two points may
    still differ further out.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if x == y:
        return Fraction(0)
    for i in range(max_depth + 1):
        if get(x, i) != get(y, i) or get(x, -i) != get(y, -i):
            return Fraction(1, 2**i)
    return Fraction(0)


def shift(x: Configuration) -> Configuration:
    """sigma(x)_i = x_{i+1}."""
    return Configuration(x.left, x.core, x.right, x.origin - 1)


def shift_inverse(x: Configuration) -> Configuration:
    return Configuration(x.left, x.core, x.right, x.origin + 1)


# ---------------------------------------------------------------- text format

_GRAMMAR = re.compile(r"\((?P<left>[^()|]*)\)\|(?P<core>[^()|]*)\|\((?P<right>[^()|]*)\)(?:@(?P<origin>-?\d+))?")


def _tokens(text: str, alphabet: Alphabet, offset: int) -> tuple:
    if alphabet.token_sep:
        out = []
        for m in re.finditer(r"\S+", text):
            if m.group() not in alphabet:
                raise ConfigParseError(f"unknown symbol {m.group()!r} for alphabet {alphabet.name}", offset + m.start())
            out.append(m.group())
        return tuple(out)
    for k, ch in enumerate(text):
        if ch not in alphabet:
            raise ConfigParseError(f"unknown symbol {ch!r} for alphabet {alphabet.name}", offset + k)
    return tuple(text)


def parse_config(text: str, alphabet: Alphabet | str = PRODUCT) -> Configuration:
    """Parse ``(TAIL)|CORE|(TAIL)[@ORIGIN]``."""
    if isinstance(alphabet, str):
        alphabet = ALPHABETS[alphabet]
    text = text.strip()
    m = _GRAMMAR.fullmatch(text)
    if m is None:
        raise ConfigParseError(f"malformed configuration {text!r}", _first_bad(text))
    left = _tokens(m.group("left"), alphabet, m.start("left"))
    core = _tokens(m.group("core"), alphabet, m.start("core"))
    right = _tokens(m.group("right"), alphabet, m.start("right"))
    if not left:
        raise ConfigParseError("empty left tail", m.start("left"))
    if not right:
        raise ConfigParseError("empty right tail", m.start("right"))
    origin = int(m.group("origin")) if m.group("origin") else 0
    return Configuration(left, core, right, origin)


def _first_bad(text: str) -> int:
    # longest prefix that is still a prefix of some well-formed string
    expect = ["(", "tail", ")", "|", "core", "|", "(", "tail", ")"]
    pos = 0
    for part in expect:
        if part in ("tail", "core"):
            while pos < len(text) and text[pos] not in "()|":
                pos += 1
            continue
        if pos >= len(text) or text[pos] != part:
            return pos
        pos += 1
    return pos


def format_config(x: Configuration, alphabet: Alphabet | None = None) -> str:
    sep = " " if (alphabet is not None and alphabet.token_sep) or _is_stacked(x) else ""
    out = f"({sep.join(x.left)})|{sep.join(x.core)}|({sep.join(x.right)})"
    if x.origin != 0:
        out += f"@{x.origin}"
    return out


def _is_stacked(x: Configuration) -> bool:
    return len(x.right[0]) > 1
