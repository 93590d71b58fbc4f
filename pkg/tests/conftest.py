import itertools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wnrings.exactfield import QQ, rational_functions  # noqa: E402
from wnrings.multival import MultiValRing  # noqa: E402
from wnrings.valuation import degree, padic, polyadic  # noqa: E402

PRIMES = (2, 3, 5, 7)
F5 = rational_functions(5)


def q_rings():
    for k in range(1, 5):
        for T in itertools.combinations(PRIMES, k):
            yield T, MultiValRing(tuple(padic(p) for p in T))


def f5_valuations():
    t = F5.gen()
    return (polyadic(t, F5), polyadic(t + 1, F5), degree(F5))


def f5_rings():
    vs = f5_valuations()
    for k in range(1, 4):
        for T in itertools.combinations(range(3), k):
            yield T, MultiValRing(tuple(vs[i] for i in T))


def all_rings():
    """Every ring of the first acceptance criterion, with a label."""
    for T, R in q_rings():
        yield "Q" + ",".join(map(str, T)), R
    names = ("t", "t+1", "deg")
    for T, R in f5_rings():
        yield "F5:" + ",".join(names[i] for i in T), R


def ring(*primes) -> MultiValRing:
    return MultiValRing(tuple(padic(p) for p in primes))


@pytest.fixture
def R23():
    return ring(2, 3)


@pytest.fixture
def R235():
    return ring(2, 3, 5)


def q(a, b=1):
    return QQ.element(a, b)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
