import numpy as np
import pytest

from ybenum.canon import act
from ybenum.perm import Permutation
from ybenum.props import (
    ClassificationRecord,
    PermutationGroupInfo,
    classify,
    gi_counterexamples,
    is_biquandle,
    is_gi_counterexample,
    is_indecomposable,
    is_irretractable,
    is_square_free,
    multipermutation_level,
    permutation_group,
    retract,
)
from ybenum.tables import CycleSetTable, trivial_table
from ybenum.yb import cycle_set_to_solution, flip, skew_cycle_set_to_solution, solution_to_cycle_set

ROWS = {
    "square_free": [1, 2, 5, 17, 68],
    "indecomposable": [1, 1, 5, 1, 10],
    "multipermutation": [2, 5, 21, 84, 554],
    "irretractable": [0, 0, 2, 4, 9],
}


def closure(gens):
    """Group generated by tuples, by naive closure."""
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[i]] for i in range(n))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def orbit_count(gens):
    n = len(gens[0])
    left = set(range(n))
    count = 0
    while left:
        stack = [left.pop()]
        count += 1
        while stack:
            x = stack.pop()
            for g in gens:
                if g[x] in left:
                    left.remove(g[x])
                    stack.append(g[x])
    return count


@pytest.mark.parametrize("n", range(2, 7))
def test_classification_rows(db, n):
    items = db.cycle_sets(n)
    assert sum(is_square_free(m) for m in items) == ROWS["square_free"][n - 2]
    assert sum(is_indecomposable(m) for m in items) == ROWS["indecomposable"][n - 2]
    assert sum(multipermutation_level(m) is not None for m in items) == ROWS["multipermutation"][n - 2]
    assert sum(is_irretractable(m) for m in items) == ROWS["irretractable"][n - 2]
    assert gi_counterexamples(items)[0] == 0


def test_size_two_group_order(db):
    orders = sorted(permutation_group(m).order for m in db.cycle_sets(2))
    assert orders == [1, 2]


@pytest.mark.parametrize("n", range(2, 6))
def test_group_against_closure(db, n):
    for m in db.cycle_sets(n):
        gens = [tuple(int(v) for v in row) for row in m.z]
        grp = permutation_group(m)
        assert grp.order == len(closure(gens))
        assert is_indecomposable(m) == (orbit_count(gens) == 1)


def test_trivial_cycle_set():
    m = CycleSetTable(trivial_table(5))
    rec = classify(m)
    assert rec.square_free and not rec.indecomposable
    assert rec.multipermutation_level == 1
    assert rec.permutation_group_order == 1
    assert multipermutation_level(CycleSetTable(trivial_table(1))) == 0


def test_retract_matches_definition(db):
    for m in db.cycle_sets(5):
        z = m.z
        rows = sorted({tuple(r) for r in z.tolist()})
        assert retract(m).n == len(rows)
        ret = retract(m)
        # x -> class index in first-appearance order
        order = []
        for r in z.tolist():
            if tuple(r) not in order:
                order.append(tuple(r))
        cls = [order.index(tuple(r)) for r in z.tolist()]
        for x in range(m.n):
            for y in range(m.n):
                assert ret.z[cls[x], cls[y]] == cls[z[x, y]]


def test_irretractable_means_retract_is_self(db):
    for m in db.cycle_sets(6):
        assert is_irretractable(m) == (retract(m).n == m.n)
        lvl = multipermutation_level(m)
        if is_irretractable(m):
            assert lvl is None


def test_examples(example_a, example_b):
    for sol in (example_a, example_b):
        m = solution_to_cycle_set(sol)
        assert is_indecomposable(m)
        assert multipermutation_level(m) is not None
        assert retract(m).n == 4
        assert not is_gi_counterexample(m)


@pytest.mark.parametrize("n", range(2, 6))
def test_classification_invariant_under_relabeling(db, n):
    rng = np.random.default_rng(n)
    for m in db.cycle_sets(n):
        g = Permutation.from_zero_based(rng.permutation(n))
        assert classify(CycleSetTable(act(m.m, g))) == classify(m)


def test_classify_accepts_solutions(db):
    for m in db.cycle_sets(4):
        assert classify(cycle_set_to_solution(m)) == classify(m)
    assert classify(flip(3)).square_free


def test_noninvolutive_records(db):
    recs = [classify(sc) for sc in db.noninvolutive(3)]
    assert all(not r.involutive and r.multipermutation_level is None and not r.gi_counterexample for r in recs)
    assert sum(r.biquandle for r in recs) == 10
    for sc in db.noninvolutive(3):
        sol = skew_cycle_set_to_solution(sc)
        assert is_biquandle(sol) == sc.r.is_quandle()
        gens = [tuple(int(v) for v in row) for row in np.vstack([sol.s, sol.t])]
        assert classify(sc).permutation_group_order == len(closure(gens))


def test_biquandle_counts(db):
    assert [sum(sc.r.is_quandle() for sc in db.noninvolutive(n)) for n in (2, 3, 4)] == [0, 10, 75]


def test_record_line_round_trip(db):
    for m in db.cycle_sets(5):
        rec = classify(m)
        assert ClassificationRecord.from_line(rec.to_line()) == rec
    rec = classify(db.noninvolutive(3)[0], group_order=False)
    assert rec.permutation_group_order is None
    assert ClassificationRecord.from_line(rec.to_line()) == rec


def test_group_info_direct():
    g = PermutationGroupInfo(np.array([[1, 2, 0, 3], [1, 0, 2, 3]]))
    assert g.order == 6 and not g.is_transitive()
