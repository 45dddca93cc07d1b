"""Alphabets for the three automata.

Every symbol is stored as its text code (a short ``str``), so configurations
hash and print cheaply.  The digit layer and the product layer share codes:
``'_'`` is both the A1 blank and the product blank (Empty, Empty), and a bare
digit ``'0'`` is (Zero, Empty).
"""

from __future__ import annotations

from dataclasses import dataclass, field

EMPTY = "_"
ZERO, ONE, TWO = "0", "1", "2"
ARROW = "<"

DIGITS = (ZERO, ONE, TWO)

# (layer1, layer2) <-> product code
_PRODUCT_CODES = {
    (EMPTY, EMPTY): "_",
    (ZERO, EMPTY): "0",
    (ONE, EMPTY): "1",
    (TWO, EMPTY): "2",
    (EMPTY, ARROW): "<",
    (ZERO, ARROW): "A",
    (ONE, ARROW): "B",
    (TWO, ARROW): "C",
}
_PRODUCT_LAYERS = {code: pair for pair, code in _PRODUCT_CODES.items()}


@dataclass(frozen=True)
class Alphabet:
    """A finite symbol set plus its text and display encodings."""

    name: str
    symbols: tuple[str, ...]
    glyphs: dict[str, str] = field(default_factory=dict, compare=False, hash=False)
    # stacked cells are two characters wide and need a separator
    token_sep: str = ""

    @property
    def blank(self) -> str:
        return self.symbols[0]

    @property
    def token_width(self) -> int:
        return len(self.symbols[0])

    def index(self) -> dict[str, int]:
        return {s: k for k, s in enumerate(self.symbols)}

    def __contains__(self, s: object) -> bool:
        return s in self.symbols

    def __len__(self) -> int:
        return len(self.symbols)

    def glyph(self, s: str, ascii_only: bool = False) -> str:
        if ascii_only:
            return s
        return self.glyphs.get(s, s)


_BASE_GLYPHS = {"_": "·", "0": "0", "1": "1", "2": "2", "<": "←", "A": "⓪", "B": "①", "C": "②"}

A1 = Alphabet("A1", ("_", "0", "1", "2"), {k: _BASE_GLYPHS[k] for k in "_012"})
A2 = Alphabet("A2", ("_", "<"), {k: _BASE_GLYPHS[k] for k in "_<"})
PRODUCT = Alphabet("A", ("_", "0", "1", "2", "<", "A", "B", "C"), dict(_BASE_GLYPHS))
A3 = Alphabet("A3", ("a", "b", "c"))
STACKED = Alphabet(
    "AS",
    tuple(p + q for p in PRODUCT.symbols for q in A3.symbols),
    {p + q: _BASE_GLYPHS[p] + q for p in PRODUCT.symbols for q in A3.symbols},
    token_sep=" ",
)

ALPHABETS = {a.name: a for a in (A1, A2, PRODUCT, A3, STACKED)}


def residue(digit: str) -> int:
    """Residue mod 3 carried by a digit symbol."""
    return DIGITS.index(digit)


def product(layer1: str, layer2: str) -> str:
    return _PRODUCT_CODES[layer1, layer2]


def layer1(s: str) -> str:
    """Digit-layer projection of a product symbol (gamma_1)."""
    return _PRODUCT_LAYERS[s][0]


def layer2(s: str) -> str:
    """Arrow-layer projection of a product symbol (gamma_2)."""
    return _PRODUCT_LAYERS[s][1]


def has_arrow(s: str) -> bool:
    return s in "<ABC"


def stacked(top: str, bottom: str) -> str:
    return top + bottom


def top(s: str) -> str:
    return s[0]


def bottom(s: str) -> str:
    return s[1]
