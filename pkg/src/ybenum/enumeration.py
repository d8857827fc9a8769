"""Exhaustive search for cycle sets, racks and skew cycle sets up to isomorphism.

The search fixes the diagonal to one representative T per conjugacy class of
Sym_n (every class contains a table with that diagonal), prunes with
lex-leader constraints for a set S of relabelings commuting with T, and merges
all raw outputs through :func:`ybenum.canon.canonical_form`, so the final list
is exact whatever S is.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Collection, Iterator, Sequence

import numpy as np

from . import _kernel
from .canon import canonical_form, canonical_skew_form, rack_automorphisms
from .perm import (
    CentralizerGroup,
    CycleType,
    Permutation,
    PermGroup,
    class_representatives,
    support_filter,
)
from .tables import CycleSetTable, RackTable, SkewCycleSet

__all__ = [
    "SearchConfig",
    "SearchStats",
    "Enumeration",
    "BudgetExceeded",
    "AUTO_FULL_LIMIT",
    "symmetry_set",
    "enumerate_cycle_sets",
    "enumerate_racks",
    "enumerate_skew_cycle_sets",
    "enumerate_noninvolutive",
    "enumerate_solutions",
]

KINDS = ("cycle-set", "rack", "skew-over-rack")
MODES = ("auto", "full", "gens", "support")

# auto mode uses the whole centralizer up to this order
AUTO_FULL_LIMIT = 10_000


@dataclass
class SearchConfig:
    n: int
    kind: str = "cycle-set"
    symmetry_mode: str = "auto"
    support_k: int = 3
    diagonal_filter: Collection[CycleType] | None = None
    jobs: int = 1
    node_budget: int | None = None
    time_budget: float | None = None
    progress: Callable[["SearchStats", int, int], None] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.symmetry_mode not in MODES:
            raise ValueError(f"symmetry_mode must be one of {MODES}")
        if self.support_k < 0:
            raise ValueError("support_k must be >= 0")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.diagonal_filter is not None:
            self.diagonal_filter = {d if isinstance(d, CycleType) else CycleType(d) for d in self.diagonal_filter}
            if any(d.n != self.n for d in self.diagonal_filter):
                raise ValueError("diagonal_filter cycle types must partition n")


@dataclass
class SearchStats:
    nodes: int = 0
    constraint_prunes: int = 0
    symmetry_prunes: int = 0
    raw_outputs: int = 0
    outputs: int = 0
    wall_time: float = 0.0
    tasks_done: int = 0
    tasks_total: int = 0
    per_diagonal: dict[str, int] = field(default_factory=dict)

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.constraint_prunes += other.constraint_prunes
        self.symmetry_prunes += other.symmetry_prunes
        self.raw_outputs += other.raw_outputs
        self.tasks_done += other.tasks_done
        self.tasks_total += other.tasks_total

    def summary(self) -> str:
        return (
            f"nodes={self.nodes} constraint_prunes={self.constraint_prunes} "
            f"symmetry_prunes={self.symmetry_prunes} raw={self.raw_outputs} "
            f"classes={self.outputs} time={self.wall_time:.2f}s"
        )


class BudgetExceeded(RuntimeError):
    """Raised when the node or time budget runs out; carries what was found so far."""

    def __init__(self, partial: list, stats: SearchStats):
        super().__init__(f"search budget exceeded after {stats.nodes} nodes ({len(partial)} classes so far)")
        self.partial = partial
        self.stats = stats


@dataclass
class Enumeration:
    """Result of a search: one canonical representative per class, sorted by key."""

    items: list
    stats: SearchStats

    def __iter__(self) -> Iterator:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


# --- constraint construction -------------------------------------------------


def _const(v: int) -> int:
    return -(v + 1)


def _cycle_set_eqs(n: int) -> np.ndarray:
    eqs = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                eqs.append((i * n + j, i * n + k, j * n + i, j * n + k))
    return np.asarray(eqs, dtype=np.int64).reshape(-1, 4)


def _rack_eqs(n: int) -> np.ndarray:
    eqs = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                eqs.append((_const(i), j * n + k, i * n + j, i * n + k))
    return np.asarray(eqs, dtype=np.int64).reshape(-1, 4)


def _skew_eqs(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = r.shape[0]
    eqs = set()
    eq3 = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = (i * n + int(r[i, j]), i * n + k)
                right = (j * n + i, j * n + k)
                if left != right:
                    eqs.add(left + right)
                eq3.append((i * n + int(r[j, k]), i * n + j, i * n + k))
    return (
        np.asarray(sorted(eqs), dtype=np.int64).reshape(-1, 4),
        np.asarray(eq3, dtype=np.int64).reshape(-1, 3),
    )


def _sym_arrays(perms: Sequence[Permutation], n: int) -> tuple[np.ndarray, np.ndarray]:
    g = np.asarray([p.zero_based() for p in perms if not p.is_identity()], dtype=np.int64).reshape(-1, n)
    inv = np.empty_like(g)
    if len(g):
        inv[np.arange(len(g))[:, None], g] = np.arange(n)[None, :]
    return g, inv


def symmetry_set(group: CentralizerGroup | PermGroup, mode: str, k: int = 3) -> list[Permutation]:
    """The relabelings used for lex-leader pruning.

    ``full`` is the whole group, ``gens`` its generators, ``support`` the
    elements moving at most k points together with the generators; ``auto``
    picks ``full`` up to :data:`AUTO_FULL_LIMIT` elements and ``support``
    beyond.
    """
    if mode == "auto":
        mode = "full" if group.order <= AUTO_FULL_LIMIT else "support"
    if mode == "full":
        return [g for g in group if not g.is_identity()]
    if mode == "gens":
        return [g for g in group.generators if not g.is_identity()]
    if mode == "support":
        return support_filter(group, k)
    raise ValueError(f"unknown symmetry mode {mode!r}")


# --- task execution ----------------------------------------------------------


@dataclass
class _Task:
    label: str
    n: int
    dom0: np.ndarray
    eqs: np.ndarray
    eq3: np.ndarray
    rack: np.ndarray
    rack_inv: np.ndarray
    syms: np.ndarray
    syminv: np.ndarray
    diag_alldiff: bool


def _run_task(task: _Task, node_budget: int) -> tuple[str, np.ndarray, int, int, int, bool]:
    sols, nodes, cf, sf, done = _kernel.search(
        task.n, task.dom0, task.eqs, task.eq3, task.rack, task.rack_inv,
        task.syms, task.syminv, task.diag_alldiff, node_budget,
    )
    return task.label, sols, int(nodes), int(cf), int(sf), bool(done)


def _run_task_star(args):
    return _run_task(*args)


def _split(task: _Task) -> list[_Task]:
    """Split a task by the values of the first undecided cell of row 1."""
    n = task.n
    for c in range(min(n, task.dom0.size)):
        d = int(task.dom0[c])
        if d & (d - 1):
            out = []
            for v in range(n):
                if (d >> v) & 1:
                    dom = task.dom0.copy()
                    dom[c] = 1 << v
                    out.append(_Task(**{**task.__dict__, "dom0": dom}))
            return out
    return [task]


def _execute(tasks: list[_Task], cfg: SearchConfig, stats: SearchStats):
    """Run tasks (possibly in a pool); yields ``(label, 0-based solutions)`` per task."""
    start = time.perf_counter()
    stats.tasks_total += len(tasks)
    remaining = cfg.node_budget or 0

    def account(res):
        nonlocal remaining
        label, sols, nodes, cf, sf, done = res
        stats.nodes += nodes
        stats.constraint_prunes += cf
        stats.symmetry_prunes += sf
        stats.raw_outputs += len(sols)
        stats.tasks_done += 1
        if cfg.node_budget:
            remaining = max(cfg.node_budget - stats.nodes, 0)
        if cfg.progress is not None:
            cfg.progress(stats, stats.tasks_done, stats.tasks_total)
        return label, sols, done

    def over_time():
        return cfg.time_budget is not None and time.perf_counter() - start > cfg.time_budget

    if cfg.jobs == 1 or len(tasks) == 1:
        for t in tasks:
            if over_time() or (cfg.node_budget and remaining <= 0):
                yield None, None, False
                return
            label, sols, done = account(_run_task(t, remaining))
            yield label, sols, done
            if not done:
                return
        return
    # a node budget is shared sequentially; in a pool each task gets what is left at submission
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        futures = [pool.submit(_run_task, t, remaining) for t in tasks]
        try:
            for fut in futures:
                label, sols, done = account(fut.result(timeout=None))
                yield label, sols, done
                if not done or over_time():
                    if done:
                        yield None, None, False
                    return
        finally:
            for fut in futures:
                fut.cancel()


def _diagonal_tasks(cfg: SearchConfig, eqs: np.ndarray) -> list[_Task]:
    n = cfg.n
    empty3 = np.zeros((0, 3), dtype=np.int64)
    dummy = np.zeros((1, 1), dtype=np.int64)
    tasks = []
    full = (1 << n) - 1
    for t in class_representatives(n):
        ct = t.cycle_type()
        if cfg.diagonal_filter is not None and ct not in cfg.diagonal_filter:
            continue
        group = CentralizerGroup(t)
        syms, syminv = _sym_arrays(symmetry_set(group, cfg.symmetry_mode, cfg.support_k), n)
        dom0 = np.full(n * n, full, dtype=np.int64)
        for i in range(n):
            dom0[i * n + i] = 1 << (t(i + 1) - 1)
        base = _Task(str(t), n, dom0, eqs, empty3, dummy, dummy, syms, syminv, False)
        tasks.extend(_split(base))
    return tasks


def _collect(results, key_fn, build_fn, stats: SearchStats, start: float):
    found: dict = {}
    exhausted = True
    for label, sols, done in results:
        if label is None:
            exhausted = False
            break
        count_before = len(found)
        for row in sols:
            key = key_fn(row)
            if key not in found:
                found[key] = row
        stats.per_diagonal[label] = stats.per_diagonal.get(label, 0) + len(found) - count_before
        if not done:
            exhausted = False
            break
    items = [build_fn(k) for k in sorted(found)]
    stats.outputs = len(items)
    stats.wall_time = time.perf_counter() - start
    if not exhausted:
        raise BudgetExceeded(items, stats)
    return Enumeration(items, stats)


def _table_enumeration(cfg: SearchConfig, eqs: np.ndarray, cls) -> Enumeration:
    start = time.perf_counter()
    n = cfg.n
    stats = SearchStats()
    tasks = _diagonal_tasks(cfg, eqs)

    def key_fn(row):
        return canonical_form(row.reshape(n, n).astype(np.int64) + 1)

    def build(key):
        return cls.from_zero_based(np.frombuffer(key.canon, dtype=np.uint8).reshape(n, n))

    return _collect(_execute(tasks, cfg, stats), key_fn, build, stats, start)


def enumerate_cycle_sets(cfg: SearchConfig) -> Enumeration:
    """All non-degenerate cycle sets of size ``cfg.n`` up to isomorphism."""
    if cfg.kind != "cycle-set":
        raise ValueError("config kind must be 'cycle-set'")
    return _table_enumeration(cfg, _cycle_set_eqs(cfg.n), CycleSetTable)


def enumerate_racks(cfg: SearchConfig) -> Enumeration:
    """All racks of size ``cfg.n`` up to isomorphism."""
    if cfg.kind != "rack":
        raise ValueError("config kind must be 'rack'")
    return _table_enumeration(cfg, _rack_eqs(cfg.n), RackTable)


def _skew_tasks(rack: RackTable, cfg: SearchConfig) -> list[_Task]:
    n = rack.n
    zr = rack.z.astype(np.int64)
    rinv = np.empty_like(zr)
    rinv[np.arange(n)[:, None], zr] = np.arange(n)[None, :]
    eqs, eq3 = _skew_eqs(zr)
    auts = rack_automorphisms(rack.z + 1)
    group = PermGroup(n, auts)
    mode = "full" if cfg.symmetry_mode == "auto" else cfg.symmetry_mode
    syms, syminv = _sym_arrays(symmetry_set(group, mode, cfg.support_k), n)
    dom0 = np.full(n * n, (1 << n) - 1, dtype=np.int64)
    label = " ".join("".join(str(x + 1) for x in row) for row in rack.z)
    return _split(_Task(label, n, dom0, eqs, eq3, zr, rinv, syms, syminv, True))


def _skew_enumeration(racks: Sequence[RackTable], cfg: SearchConfig) -> Enumeration:
    start = time.perf_counter()
    stats = SearchStats()
    tasks = []
    by_label = {}
    for rack in racks:
        ts = _skew_tasks(rack, cfg)
        for t in ts:
            by_label[t.label] = rack
        tasks.extend(ts)
    n = cfg.n

    # the rack is fixed per task, so results are keyed through the label
    def run():
        for label, sols, done in _execute(tasks, cfg, stats):
            if label is None:
                yield label, sols, done
                continue
            zr = by_label[label].z
            yield label, [(zr, row.reshape(n, n)) for row in sols], done

    def key_fn(pair):
        zr, zm = pair
        return canonical_skew_form(SkewCycleSet.from_zero_based(zm, zr))

    def build(key):
        flat = np.frombuffer(key.canon, dtype=np.uint8)
        return SkewCycleSet.from_zero_based(flat[n * n:].reshape(n, n), flat[: n * n].reshape(n, n))

    return _collect(run(), key_fn, build, stats, start)


def enumerate_skew_cycle_sets(rack: RackTable, cfg: SearchConfig) -> Enumeration:
    """All skew cycle sets over ``rack`` up to relabelings fixing the rack."""
    if cfg.kind != "skew-over-rack":
        raise ValueError("config kind must be 'skew-over-rack'")
    if not isinstance(rack, RackTable):
        rack = RackTable(rack)
    if rack.n != cfg.n:
        raise ValueError("rack size does not match config")
    return _skew_enumeration([rack], cfg)


def enumerate_noninvolutive(
    n: int,
    *,
    quandles_only: bool = False,
    include_trivial: bool = False,
    symmetry_mode: str = "auto",
    jobs: int = 1,
    node_budget: int | None = None,
    time_budget: float | None = None,
    progress=None,
) -> Enumeration:
    """Skew cycle sets over every rack class of size n (trivial rack excluded by default).

    With ``quandles_only`` only quandle racks are used, which yields the
    non-involutive biquandles.
    """
    racks = enumerate_racks(SearchConfig(n, "rack", jobs=jobs)).items
    chosen = [
        r for r in racks
        if (include_trivial or not r.is_trivial()) and (not quandles_only or r.is_quandle())
    ]
    cfg = SearchConfig(
        n, "skew-over-rack", symmetry_mode=symmetry_mode, jobs=jobs,
        node_budget=node_budget, time_budget=time_budget, progress=progress,
    )
    return _skew_enumeration(chosen, cfg)


FAMILIES = ("involutive", "non-involutive", "biquandle", "all")


def enumerate_solutions(n: int, family: str = "all", *, jobs: int = 1, verify: bool = True):
    """Yield one :class:`~ybenum.yb.SolutionMap` per isomorphism class of solutions.

    ``biquandle`` means the non-involutive biquandles (quandle rack other than
    the trivial one).
    """
    from .yb import cycle_set_to_solution, skew_cycle_set_to_solution, verify_ybe

    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}")
    sources = []
    if family in ("involutive", "all"):
        sources.append(
            cycle_set_to_solution(m) for m in enumerate_cycle_sets(SearchConfig(n, "cycle-set", jobs=jobs))
        )
    if family in ("non-involutive", "biquandle", "all"):
        sources.append(
            skew_cycle_set_to_solution(sc)
            for sc in enumerate_noninvolutive(n, quandles_only=family == "biquandle", jobs=jobs)
        )
    for src in sources:
        for sol in src:
            if verify:
                res = verify_ybe(sol)
                if not res:
                    raise AssertionError(f"enumerated solution fails the braid relation at {res.witness}")
            yield sol


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("YBENUM_JOBS", "1")))
    except ValueError:
        return 1
