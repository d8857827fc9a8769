"""Structural predicates on involutive solutions, computed on the cycle-set side.

Since τ_x = φ_x^-1, "τ_x = τ_y" is just "rows x and y of the table agree",
which is what retraction, irretractability and the multipermutation level use.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .tables import CycleSetTable, SkewCycleSet, check_cycle_set, is_quandle
from .yb import SolutionMap, is_involutive, solution_to_cycle_set, solution_to_skew_cycle_set

__all__ = [
    "PermutationGroupInfo",
    "ClassificationRecord",
    "is_square_free",
    "permutation_group",
    "is_indecomposable",
    "retract",
    "multipermutation_level",
    "is_irretractable",
    "is_gi_counterexample",
    "gi_counterexamples",
    "is_biquandle",
    "classify",
]


def _z(m) -> np.ndarray:
    if isinstance(m, CycleSetTable):
        return m.z
    return CycleSetTable(m).z


def is_square_free(m) -> bool:
    """``m[i][i] = i`` for all i."""
    z = _z(m)
    return bool(np.all(np.diagonal(z) == np.arange(z.shape[0])))


def _orbits(gens: np.ndarray, n: int) -> list[frozenset[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            a, b = find(x), find(int(g[x]))
            if a != b:
                parent[a] = b
    blocks: dict[int, set[int]] = {}
    for x in range(n):
        blocks.setdefault(find(x), set()).add(x + 1)
    return sorted((frozenset(b) for b in blocks.values()), key=min)


class PermutationGroupInfo:
    """The group generated by a family of permutations of {1..n}.

    Orbits are computed up front; the order needs the whole group and is only
    computed when asked for.
    """

    def __init__(self, generators: np.ndarray):
        gens = np.unique(np.asarray(generators, dtype=np.uint8), axis=0)
        self.n = gens.shape[1]
        self.generators = gens
        self.orbits = _orbits(gens, self.n)
        self._order: int | None = None

    def is_transitive(self) -> bool:
        return len(self.orbits) == 1

    @property
    def order(self) -> int:
        if self._order is None:
            ident = tuple(range(self.n))
            gens = [tuple(int(x) for x in g) for g in self.generators]
            seen = {ident}
            frontier = [ident]
            while frontier:
                nxt = []
                for h in frontier:
                    for g in gens:
                        k = tuple(g[x] for x in h)
                        if k not in seen:
                            seen.add(k)
                            nxt.append(k)
                frontier = nxt
            self._order = len(seen)
        return self._order


def permutation_group(m) -> PermutationGroupInfo:
    """Group generated by the rows φ_x of a cycle-set table."""
    return PermutationGroupInfo(_z(m))


def is_indecomposable(m) -> bool:
    return permutation_group(m).is_transitive()


def _row_classes(z: np.ndarray) -> tuple[np.ndarray, int]:
    labels = np.empty(z.shape[0], dtype=np.intp)
    seen: dict[bytes, int] = {}
    for i, row in enumerate(z):
        labels[i] = seen.setdefault(row.tobytes(), len(seen))
    return labels, len(seen)


def retract(m) -> CycleSetTable:
    """The cycle set on classes of equal rows, ``[x]·[y] = [x·y]``.

    Raises ``RuntimeError`` if the induced operation is not well defined or not
    a cycle set; for valid input this cannot happen.
    """
    z = _z(m)
    labels, k = _row_classes(z)
    # induced[labels[x], labels[y]] must equal labels[z[x, y]] for every x, y
    images = labels[z]
    induced = np.full((k, k), -1, dtype=np.intp)
    for x in range(z.shape[0]):
        for y in range(z.shape[0]):
            cur = induced[labels[x], labels[y]]
            if cur < 0:
                induced[labels[x], labels[y]] = images[x, y]
            elif cur != images[x, y]:
                raise RuntimeError(f"retraction not well defined at ({x + 1},{y + 1})")
    res = check_cycle_set(induced + 1)
    if not res:
        raise RuntimeError(f"retraction is not a cycle set: {res.violation}")
    return CycleSetTable.from_zero_based(induced)


def multipermutation_level(m) -> int | None:
    """Least k with ``|Ret^k| = 1``, or None if retraction stalls above size 1."""
    cur = m if isinstance(m, CycleSetTable) else CycleSetTable(m)
    level = 0
    while cur.n > 1:
        nxt = retract(cur)
        if nxt.n == cur.n:
            return None
        cur = nxt
        level += 1
    return level


def is_irretractable(m) -> bool:
    z = _z(m)
    return _row_classes(z)[1] == z.shape[0]


def is_gi_counterexample(m) -> bool:
    """Square-free and irretractable, of size at least 2."""
    z = _z(m)
    return z.shape[0] >= 2 and is_square_free(m) and is_irretractable(m)


def gi_counterexamples(tables: Iterable[CycleSetTable]) -> tuple[int, list[CycleSetTable]]:
    found = [m for m in tables if is_gi_counterexample(m)]
    return len(found), found


def is_biquandle(sol: SolutionMap) -> bool:
    """Whether the rack attached to the solution is a quandle."""
    return is_quandle(solution_to_skew_cycle_set(sol).r.z + 1)


@dataclass(frozen=True)
class ClassificationRecord:
    """Per-solution summary.

    For non-involutive solutions retraction is not defined here:
    ``irretractable`` is False, ``multipermutation_level`` None and
    ``gi_counterexample`` False.  Their group is generated by all σ_x and τ_x.
    """

    n: int
    involutive: bool
    square_free: bool
    indecomposable: bool
    irretractable: bool
    multipermutation_level: int | None
    biquandle: bool
    gi_counterexample: bool
    permutation_group_order: int | None = None

    def to_line(self) -> str:
        parts = []
        for k, v in asdict(self).items():
            if isinstance(v, bool):
                v = int(v)
            parts.append(f"{k}={'-' if v is None else v}")
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> "ClassificationRecord":
        kv = dict(tok.split("=", 1) for tok in line.split())
        out = {}
        for k, f in cls.__dataclass_fields__.items():
            v = kv.get(k, "-")
            if v == "-":
                out[k] = None
            elif f.type == "bool":
                out[k] = v == "1"
            else:
                out[k] = int(v)
        return cls(**out)


def classify(obj, *, group_order: bool = True) -> ClassificationRecord:
    """Classify a cycle-set table, skew cycle set or solution."""
    if isinstance(obj, SolutionMap):
        if is_involutive(obj):
            obj = solution_to_cycle_set(obj)
        else:
            obj = solution_to_skew_cycle_set(obj)
    if isinstance(obj, SkewCycleSet) and obj.is_involutive():
        obj = obj.m
    if isinstance(obj, SkewCycleSet):
        from .yb import skew_cycle_set_to_solution

        sol = skew_cycle_set_to_solution(obj)
        n = obj.n
        diag_fixed = all(sol(x, x) == (x, x) for x in range(1, n + 1))
        grp = PermutationGroupInfo(np.vstack([sol.s, sol.t]))
        return ClassificationRecord(
            n=n,
            involutive=False,
            square_free=diag_fixed,
            indecomposable=grp.is_transitive(),
            irretractable=False,
            multipermutation_level=None,
            biquandle=obj.r.is_quandle(),
            gi_counterexample=False,
            permutation_group_order=grp.order if group_order else None,
        )
    m = obj if isinstance(obj, CycleSetTable) else CycleSetTable(obj)
    grp = permutation_group(m)
    return ClassificationRecord(
        n=m.n,
        involutive=True,
        square_free=is_square_free(m),
        indecomposable=grp.is_transitive(),
        irretractable=is_irretractable(m),
        multipermutation_level=multipermutation_level(m),
        biquandle=True,
        gi_counterexample=is_gi_counterexample(m),
        permutation_group_order=grp.order if group_order else None,
    )
