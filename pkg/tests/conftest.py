import re
from collections import defaultdict

import pytest
from hypothesis import strategies as st

from diamca.config import Configuration
from diamca.symbols import A1, A3, PRODUCT, STACKED

ALPHABET_OF = {"t1": A1, "t": PRODUCT, "t3": A3, "ts": STACKED}


def words(alphabet, min_size=0, max_size=8):
    return st.lists(st.sampled_from(alphabet.symbols), min_size=min_size, max_size=max_size).map(tuple)


@st.composite
def configurations(draw, alphabet=PRODUCT, max_core=8):
    left = draw(words(alphabet, 1, 3))
    core = draw(words(alphabet, 0, max_core))
    right = draw(words(alphabet, 1, 3))
    origin = draw(st.integers(-6, 6))
    return Configuration(left, core, right, origin)


_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter):
    outcome = defaultdict(lambda: True)
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if m and rep.when in ("setup", "call", "teardown"):
                outcome[int(m.group(1))] &= key == "passed"
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcome):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if outcome[n] else 'FAIL'}")
