"""Reference data: the 28-row orbit tables and the case-by-case display of T.

Orbit rows use the ASCII text encoding, one character per cell, columns 0..5.
"""

# T1 from blank 0000 blank, 27 steps
TABLE_T1_BLOCK = (
    "_0000_", "_0001_", "_0002_", "_0010_", "_0011_", "_0012_", "_0020_",
    "_0121_", "_0222_", "_1000_", "_1001_", "_1002_", "_1010_", "_1011_",
    "_1012_", "_1020_", "_1121_", "_1222_", "_2000_", "_2001_", "_2002_",
    "_2010_", "_2011_", "_2012_", "_2020_", "_2121_", "_2222_", "_0000_",
)

# T from blank 000 (Zero,Arrow) followed by the all-arrow tail
TABLE_T_BLOCK = (
    "_000A<", "_000B<", "_000C<", "_00BA<", "_00BB<", "_00BC<", "_00CA<",
    "_0B2B<", "_0C2C<", "_B0AA<", "_B0AB<", "_B0AC<", "_B0BA<", "_B0BB<",
    "_B0BC<", "_B0CA<", "_BB2B<", "_BC2C<", "_C0AA<", "<20AB<", "_20AC<",
    "_20BA<", "_20BB<", "_20BC<", "_20CA<", "_2B2B<", "_2C2C<", "_A0AA<",
)

# T from blank 0 blank 00 followed by the all-arrow tail
TABLE_T_TWO_WALLS = (
    "_0_00<", "_1_0B<", "_2_0C<", "_0_BA<", "_1_BB<", "_2_BC<", "_0_CA<",
    "_1<2B<", "_C_2C<", "<0_AA<", "_1_AB<", "_2_AC<", "_0_BA<", "_1_BB<",
    "_2_BC<", "_0_CA<", "_1<2B<", "_C_2C<", "<0_AA<", "_1_AB<", "_2_AC<",
    "_0_BA<", "_1_BB<", "_2_BC<", "_0_CA<", "_1<2B<", "_C_2C<", "<0_AA<",
)

TABLES = {
    "t1-block": ("t1", "(_)|_0000_|(_)", TABLE_T1_BLOCK),
    "t-block": ("t", "(_)|_000A|(<)", TABLE_T_BLOCK),
    "t-two-walls": ("t", "(_)|_0_00|(<)", TABLE_T_TWO_WALLS),
}

_ALL = "_012<ABC"
_CLOSED = "01AB"  # right neighbours that neither tick the digit nor push an arrow

# output -> list of (center symbols, right symbols), as displayed case by case
T_DISPLAY = {
    "_": [("_<", "_012AB")],
    "<": [("_<", "<C")],
    "0": [("2C", "_2"), ("0", _CLOSED)],
    "1": [("0", "_2"), ("1", _CLOSED)],
    "2": [("1", "_2"), ("2C", _CLOSED)],
    "A": [("2C", "<C"), ("A", _CLOSED)],
    "B": [("0", "<C"), ("A", "_<2C"), ("B", _CLOSED)],
    "C": [("1", "<C"), ("B", "_<2C")],
}


def display_table() -> dict:
    """Expand :data:`T_DISPLAY` into (center, right) -> set of outputs."""
    out: dict = {(c, r): set() for c in _ALL for r in _ALL}
    for value, cases in T_DISPLAY.items():
        for centers, rights in cases:
            for c in centers:
                for r in rights:
                    out[c, r].add(value)
    return out
