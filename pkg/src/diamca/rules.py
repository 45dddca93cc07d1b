"""Local rules of the automata as (center, right) -> symbol maps.

Each rule exists as a plain function and as an enumerated :class:`RuleTable`;
the engine only ever consults tables.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable

from diamca.symbols import (
    A1,
    A2,
    A3,
    ARROW,
    DIGITS,
    EMPTY,
    PRODUCT,
    STACKED,
    TWO,
    Alphabet,
    bottom,
    layer1,
    layer2,
    product,
    residue,
    top,
)

# digit-layer values that let the left neighbour tick and let an arrow move on
OPEN = (EMPTY, TWO)


def rule_t1(center: str, right: str) -> str:
    if center == EMPTY:
        return EMPTY
    if right in OPEN:
        return DIGITS[(residue(center) + 1) % 3]
    return center


def rule_shift(center: str, right: str) -> str:
    """The shift map on the arrow layer."""
    return right


def _moving(s: str) -> bool:
    return layer2(s) == ARROW and layer1(s) in OPEN


def rule_t(center: str, right: str) -> str:
    """Odometer on the digit layer; arrows step left off Empty/Two cells.

    An arrow sitting on Zero or One stays put.  An arrow moving onto an
    occupied cell merges with the resident one.
    """
    digit = rule_t1(layer1(center), layer1(right))
    arrow = _moving(right) or (layer2(center) == ARROW and not _moving(center))
    return product(digit, ARROW if arrow else EMPTY)


def rule_t_formula(center: str, right: str) -> str:
    """Set-intersection reading of the arrow update, kept only for the audit.

    Takes the right neighbour's arrow layer whenever either cell is an arrow on
    Empty/Two.  It disagrees with :func:`rule_t` exactly when the center is a
    moving arrow and the right cell is a resting one.
    """
    digit = rule_t1(layer1(center), layer1(right))
    if _moving(center) or _moving(right):
        arrow = layer2(right)
    else:
        arrow = layer2(center)
    return product(digit, arrow)


_T3 = {"a": "a", "b": "c", "c": "b"}


def rule_t3(center: str, right: str | None = None) -> str:
    return _T3[center]


def rule_ts(center: str, right: str) -> str:
    new_top = rule_t(top(center), top(right))
    if layer2(top(center)) == ARROW:
        return new_top + bottom(center)
    return new_top + rule_t3(bottom(center))


@dataclass(frozen=True)
class RuleTable:
    """Total map over alphabet x alphabet."""

    name: str
    alphabet: Alphabet
    table: dict

    @classmethod
    def from_function(cls, name: str, alphabet: Alphabet, fn: Callable[[str, str], str]) -> "RuleTable":
        return cls(name, alphabet, {(c, r): fn(c, r) for c in alphabet.symbols for r in alphabet.symbols})

    def __call__(self, center: str, right: str) -> str:
        return self.table[center, right]

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.table.items()))))

    def entries(self):
        for c in self.alphabet.symbols:
            for r in self.alphabet.symbols:
                yield c, r, self.table[c, r]

    def replace(self, center: str, right: str, output: str) -> "RuleTable":
        """Copy with a single entry overwritten (used for fault injection)."""
        table = dict(self.table)
        table[center, right] = output
        return RuleTable(self.name + "*", self.alphabet, table)

    def as_array(self):
        import numpy as np

        idx = self.alphabet.index()
        n = len(self.alphabet)
        out = np.zeros((n, n), dtype=np.int8)
        for (c, r), v in self.table.items():
            out[idx[c], idx[r]] = idx[v]
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["center", "right", "output"])
        w.writerows(self.entries())
        return buf.getvalue()


T1 = RuleTable.from_function("t1", A1, rule_t1)
SIGMA = RuleTable.from_function("sigma", A2, rule_shift)
T = RuleTable.from_function("t", PRODUCT, rule_t)
T3 = RuleTable.from_function("t3", A3, rule_t3)
TS = RuleTable.from_function("ts", STACKED, rule_ts)

RULES = {r.name: r for r in (T1, T, T3, TS)}


def blank_preserving(rule: RuleTable) -> bool:
    """Digit layer is Empty in the output iff it is Empty in the center."""

    def digit(s: str) -> str:
        if rule.alphabet is STACKED:
            s = top(s)
        if rule.alphabet in (PRODUCT, STACKED):
            return layer1(s)
        return s

    if rule.alphabet in (A3, A2):
        return True
    return all((digit(v) == EMPTY) == (digit(c) == EMPTY) for c, _, v in rule.entries())
