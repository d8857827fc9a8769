import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from ybenum.enumeration import SearchConfig, enumerate_cycle_sets, enumerate_noninvolutive, enumerate_racks
from ybenum.perm import Permutation
from ybenum.yb import SolutionMap

# Examples 2.3 and 2.4: the two size-8 solutions missing from the older census.
EXAMPLE_A_SIGMA = ["(16345278)", "(12745638)", "(12385674)", "(16785234)"] * 2
EXAMPLE_A_TAU = ["(18365472)", "(14765832)", "(14325876)", "(18725436)"] * 2
EXAMPLE_B_SIGMA = ["(1278)(3456)", "(1238)(4567)", "(1234)(5678)", "(1678)(2345)"] * 2
EXAMPLE_B_TAU = ["(1832)(4765)", "(1432)(5876)", "(1876)(2543)", "(1872)(3654)"] * 2


def _solution(sigma, tau):
    return SolutionMap([Permutation.parse(s, 8) for s in sigma], [Permutation.parse(t, 8) for t in tau])


@pytest.fixture(scope="session")
def example_a():
    return _solution(EXAMPLE_A_SIGMA, EXAMPLE_A_TAU)


@pytest.fixture(scope="session")
def example_b():
    return _solution(EXAMPLE_B_SIGMA, EXAMPLE_B_TAU)


_cache = {}


def cycle_sets(n):
    if ("cs", n) not in _cache:
        _cache[("cs", n)] = enumerate_cycle_sets(SearchConfig(n)).items
    return _cache[("cs", n)]


def racks(n):
    if ("rack", n) not in _cache:
        _cache[("rack", n)] = enumerate_racks(SearchConfig(n, "rack")).items
    return _cache[("rack", n)]


def noninvolutive(n):
    if ("skew", n) not in _cache:
        _cache[("skew", n)] = enumerate_noninvolutive(n).items
    return _cache[("skew", n)]


@pytest.fixture(scope="session")
def db():
    """Lazily computed small databases: ``db.cycle_sets(n)``, ``db.racks(n)``, ``db.noninvolutive(n)``."""

    class _DB:
        pass

    d = _DB()
    d.cycle_sets = cycle_sets
    d.racks = racks
    d.noninvolutive = noninvolutive
    return d


CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
