import pytest

import oracles
from crosscheck import compare


@pytest.mark.parametrize("kind", ["cycle-set", "rack", "skew"])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_engine_matches_naive(kind, n):
    engine, oracle = compare(kind, n)
    assert len(set(engine)) == len(engine)
    assert engine == oracle


@pytest.mark.parametrize("n", [1, 2, 3])
def test_engine_matches_direct_braid_search(n):
    engine, oracle = compare("solution", n)
    assert engine == oracle


def test_oracle_counts():
    assert [len(oracles.orbit_classes(oracles.labeled_cycle_sets(n))) for n in (1, 2, 3, 4)] == [1, 2, 5, 23]
    assert [len(oracles.orbit_classes(oracles.labeled_racks(n))) for n in (1, 2, 3, 4)] == [1, 2, 6, 19]
    assert [len(oracles.skew_classes(n)) for n in (2, 3)] == [2, 21]
    assert [sum(not inv for *_, inv in oracles.braid_classes(n)) for n in (2, 3)] == [2, 21]
