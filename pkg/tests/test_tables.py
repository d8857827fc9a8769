import itertools

import numpy as np
import pytest

import oracles
from ybenum.tables import (
    CycleSetTable,
    MalformedTableError,
    RackTable,
    SkewCycleSet,
    check_cycle_set,
    check_rack,
    check_skew_cycle_set,
    is_quandle,
    trivial_table,
)
from ybenum.yb import cycle_set_to_solution, is_involutive, verify_ybe

DIHEDRAL3 = [[((2 * i - j) % 3) + 1 for j in range(3)] for i in range(3)]


def row_perm_tables(n, diag_perm=True):
    rows = list(itertools.permutations(range(1, n + 1)))
    for choice in itertools.product(rows, repeat=n):
        if diag_perm and len({choice[i][i] for i in range(n)}) != n:
            continue
        yield [list(r) for r in choice]


def test_repeated_diagonal_is_constraint_2():
    res = check_cycle_set([[2, 1], [1, 2]])
    assert not res
    assert res.violation.constraint == 2


def test_trivial_cycle_set():
    for n in range(1, 7):
        assert check_cycle_set(trivial_table(n))


def test_rows_must_be_permutations():
    res = check_cycle_set([[1, 1], [2, 1]])
    assert not res and res.violation.constraint == 1


def test_identity_violation_reports_witness():
    m = [[2, 3, 1], [1, 3, 2], [3, 1, 2]]
    res = check_cycle_set(m)
    if not res and res.violation.constraint == 3:
        i, j, k = res.violation.witness
        z = np.asarray(m) - 1
        assert z[z[i - 1, j - 1], z[i - 1, k - 1]] != z[z[j - 1, i - 1], z[j - 1, k - 1]]


@pytest.mark.parametrize("bad", [[[0, 1], [1, 2]], [[1, 3], [2, 1]], [[1, 2, 3]], [[1.5, 2], [2, 1]], []])
def test_malformed_is_distinct_error(bad):
    with pytest.raises(MalformedTableError):
        check_cycle_set(bad)
    with pytest.raises(MalformedTableError):
        check_rack(bad)


def test_n3_brute_force_gives_five_classes():
    # every 3x3 matrix over {1,2,3}, no pruning at all
    valid = []
    for entries in itertools.product(range(1, 4), repeat=9):
        m = np.asarray(entries).reshape(3, 3)
        if check_cycle_set(m):
            valid.append(tuple(map(tuple, m - 1)))
    assert len(oracles.orbit_classes(valid)) == 5


def test_rack_examples():
    assert check_rack(trivial_table(4))
    assert check_rack(DIHEDRAL3)
    # equal rows with a non-injective diagonal
    res = check_rack([[2, 1], [1, 2]])
    assert not res and res.violation.constraint == 2
    # the constant-row table is the unique non-trivial rack of size 2
    assert check_rack([[2, 1], [2, 1]])


def test_dihedral_self_distributive_by_hand():
    r = np.asarray(DIHEDRAL3) - 1
    for i, j, k in itertools.product(range(3), repeat=3):
        assert r[i, r[j, k]] == r[r[i, j], r[i, k]]


def test_is_quandle():
    assert is_quandle(trivial_table(3))
    assert is_quandle(DIHEDRAL3)
    assert not is_quandle([[2, 1], [2, 1]])


def test_skew_trivial_rack_reduces_to_cycle_sets():
    triv = trivial_table(3)
    for m in row_perm_tables(3, diag_perm=False):
        assert bool(check_skew_cycle_set(m, triv)) == bool(check_cycle_set(m))


def test_skew_invalid_rack_rejected_first():
    res = check_skew_cycle_set([[1, 2], [2, 1]], [[2, 1], [1, 2]])
    assert not res and res.violation.constraint == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_checker_agrees_with_braid_relation_exhaustive(n):
    for m in row_perm_tables(n):
        sol = cycle_set_to_solution(CycleSetTable(m, check=False))
        expected = bool(verify_ybe(sol)) and is_involutive(sol)
        assert bool(check_cycle_set(m)) == expected


def test_checker_agrees_with_braid_relation_n4():
    rng = np.random.default_rng(4)
    valid = oracles.labeled_cycle_sets(4)
    for t in valid:
        m = np.asarray(t) + 1
        assert check_cycle_set(m)
        assert verify_ybe(cycle_set_to_solution(CycleSetTable(m)))
    rows = list(itertools.permutations(range(1, 5)))
    seen = 0
    while seen < 300:
        m = np.asarray([rows[k] for k in rng.integers(0, 24, 4)])
        if len(set(np.diagonal(m))) < 4:
            continue
        seen += 1
        sol = cycle_set_to_solution(CycleSetTable(m, check=False))
        assert bool(check_cycle_set(m)) == (bool(verify_ybe(sol)) and is_involutive(sol))


def test_rack_diagonal_is_bijective_for_all_small_racks():
    # asserted over every labeled 3-table with permutation rows, without assuming it
    for m in row_perm_tables(3, diag_perm=False):
        z = np.asarray(m) - 1
        if all(z[i, z[j, k]] == z[z[i, j], z[i, k]] for i, j, k in itertools.product(range(3), repeat=3)):
            assert len(set(np.diagonal(z))) == 3


def test_table_classes():
    t = CycleSetTable([[2, 1], [2, 1]])
    assert t.n == 2 and t[1, 1] == 2 and t.diagonal() == (2, 1)
    assert t.z.dtype == np.uint8 and not t.z.flags.writeable
    with pytest.raises(ValueError):
        CycleSetTable([[2, 1], [1, 2]])
    r = RackTable(DIHEDRAL3)
    assert r.is_quandle() and not r.is_trivial()
    sc = SkewCycleSet(trivial_table(3), trivial_table(3))
    assert sc.is_involutive()
