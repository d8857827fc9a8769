"""Matrix encodings of cycle sets, racks and skew cycle sets, plus axiom checks.

Tables are given and reported 1-based (``m[i][j]`` in 1..n).  They are stored
as read-only ``uint8`` arrays in 0-based form (attribute ``z``) because every
consumer downstream does table lookups on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "MalformedTableError",
    "Violation",
    "CheckResult",
    "CycleSetTable",
    "RackTable",
    "SkewCycleSet",
    "as_zero_based",
    "check_cycle_set",
    "check_rack",
    "check_skew_cycle_set",
    "is_quandle",
    "trivial_table",
]

# constraint ids, following the numbering of the matrix formulations
ROWS = 1
DIAGONAL = 2
IDENTITY = 3
COMPATIBILITY = 4
RACK = 0


class MalformedTableError(ValueError):
    """The input is not an n×n matrix over {1..n} (as opposed to failing an axiom)."""


@dataclass(frozen=True)
class Violation:
    constraint: int
    witness: tuple[int, ...]
    detail: str = ""

    def __str__(self) -> str:
        w = ",".join(map(str, self.witness))
        return f"constraint ({self.constraint}) violated at ({w}){': ' + self.detail if self.detail else ''}"


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    violation: Violation | None = None

    def __bool__(self) -> bool:
        return self.ok


_OK = CheckResult(True)


def as_zero_based(m) -> np.ndarray:
    """Validate a 1-based square matrix and return its 0-based uint8 copy."""
    if isinstance(m, (CycleSetTable, RackTable)):
        return m.z
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise MalformedTableError(f"expected a non-empty square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > 255:
        raise MalformedTableError("tables larger than 255 are not supported")
    if not np.issubdtype(a.dtype, np.integer):
        if a.dtype == object or not np.all(np.equal(np.mod(a, 1), 0)):
            raise MalformedTableError("entries must be integers")
    a = a.astype(np.int64)
    if a.min() < 1 or a.max() > n:
        bad = np.argwhere((a < 1) | (a > n))[0]
        raise MalformedTableError(f"entry {a[tuple(bad)]} at ({bad[0] + 1},{bad[1] + 1}) outside 1..{n}")
    return (a - 1).astype(np.uint8)


def _first(mask: np.ndarray) -> tuple[int, ...]:
    return tuple(int(x) + 1 for x in np.argwhere(mask)[0])


def _check_rows_and_diagonal(z: np.ndarray) -> CheckResult:
    n = z.shape[0]
    srt = np.sort(z, axis=1)
    bad = np.any(srt != np.arange(n), axis=1)
    if bad.any():
        i = int(np.argmax(bad))
        return CheckResult(False, Violation(ROWS, (i + 1,), "row is not a permutation"))
    diag = np.diagonal(z)
    if len(np.unique(diag)) != n:
        vals, first = np.unique(diag, return_index=True)
        dup = sorted(set(range(n)) - set(first.tolist()))[0]
        return CheckResult(False, Violation(DIAGONAL, (dup + 1,), "diagonal entry repeated"))
    return _OK


def _cycle_lhs(z: np.ndarray) -> np.ndarray:
    # lhs[i, j, k] = M[M[i,j], M[i,k]]
    return z[z[:, :, None], z[:, None, :]]


def check_cycle_set(m) -> CheckResult:
    """Check that ``m`` encodes a non-degenerate cycle set.

    Returns a falsy :class:`CheckResult` carrying the first violated constraint
    (1 rows, 2 diagonal, 3 cycle-set identity) and a 1-based witness.
    """
    z = as_zero_based(m)
    res = _check_rows_and_diagonal(z)
    if not res:
        return res
    lhs = _cycle_lhs(z)
    bad = lhs != lhs.transpose(1, 0, 2)
    if bad.any():
        return CheckResult(False, Violation(IDENTITY, _first(bad)))
    return _OK


def _rack_bad(z: np.ndarray) -> np.ndarray:
    # R[i, R[j,k]] vs R[R[i,j], R[i,k]]
    n = z.shape[0]
    idx = np.arange(n)
    lhs = z[idx[:, None, None], z[None, :, :]]
    rhs = z[z[:, :, None], z[:, None, :]]
    return lhs != rhs


def check_rack(r) -> CheckResult:
    """Check the rack axioms: bijective rows, bijective diagonal, self-distributivity."""
    z = as_zero_based(r)
    res = _check_rows_and_diagonal(z)
    if not res:
        return res
    bad = _rack_bad(z)
    if bad.any():
        return CheckResult(False, Violation(IDENTITY, _first(bad)))
    return _OK


def check_skew_cycle_set(m, r) -> CheckResult:
    """Check that ``(m, r)`` is a skew cycle set.

    A failing rack is reported with constraint id 0 before ``m`` is looked at.
    Constraint 3 is ``(x·(x▷y))·(x·z) = (y·x)·(y·z)``, constraint 4 is
    ``x·(y▷z) = (x·y)▷(x·z)``.
    """
    zr = as_zero_based(r)
    rres = check_rack(zr + 1)
    if not rres:
        v = rres.violation
        return CheckResult(False, Violation(RACK, v.witness, f"rack: {v}"))
    z = as_zero_based(m)
    if z.shape != zr.shape:
        raise MalformedTableError("cycle-set and rack tables differ in size")
    res = _check_rows_and_diagonal(z)
    if not res:
        return res
    n = z.shape[0]
    idx = np.arange(n)
    # a[i, j] = M[i, R[i, j]]
    a = z[idx[:, None], zr]
    lhs = z[a[:, :, None], z[:, None, :]]
    rhs = z[z.T[:, :, None], z[None, :, :]]
    # rhs[i, j, k] = M[M[j,i], M[j,k]]
    bad = lhs != rhs
    if bad.any():
        return CheckResult(False, Violation(IDENTITY, _first(bad)))
    lhs4 = z[idx[:, None, None], zr[None, :, :]]
    rhs4 = zr[z[:, :, None], z[:, None, :]]
    bad = lhs4 != rhs4
    if bad.any():
        return CheckResult(False, Violation(COMPATIBILITY, _first(bad)))
    return _OK


def is_quandle(r) -> bool:
    """True iff ``r[i][i] = i`` for every i."""
    z = as_zero_based(r)
    return bool(np.all(np.diagonal(z) == np.arange(z.shape[0])))


def trivial_table(n: int) -> np.ndarray:
    """1-based matrix with ``m[i][j] = j``: the trivial cycle set and the trivial rack."""
    return np.tile(np.arange(1, n + 1, dtype=np.uint8), (n, 1))


def _freeze(z: np.ndarray) -> np.ndarray:
    z = np.ascontiguousarray(z, dtype=np.uint8)
    z.flags.writeable = False
    return z


class _Table:
    _checker = staticmethod(check_cycle_set)
    kind = ""

    __slots__ = ("z",)

    def __init__(self, m, *, check: bool = True):
        z = as_zero_based(m)
        if check:
            res = type(self)._checker(z + 1)
            if not res:
                raise ValueError(f"not a valid {self.kind}: {res.violation}")
        self.z = _freeze(z)

    @classmethod
    def from_zero_based(cls, z, *, check: bool = False):
        t = object.__new__(cls)
        z = np.asarray(z, dtype=np.uint8)
        if check:
            cls.__init__(t, z.astype(np.int64) + 1)
        else:
            t.z = _freeze(z)
        return t

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @property
    def m(self) -> np.ndarray:
        return self.z.astype(np.int64) + 1

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return int(self.z[i - 1, j - 1]) + 1

    def rows(self) -> list[list[int]]:
        return self.m.tolist()

    def diagonal(self) -> tuple[int, ...]:
        return tuple(int(x) + 1 for x in np.diagonal(self.z))

    def __eq__(self, other: object) -> bool:
        return type(other) is type(self) and np.array_equal(self.z, other.z)

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.z.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.rows()})"


class CycleSetTable(_Table):
    """``m[i][j] = i·j``; rows are the permutations φ_i, the diagonal is T."""

    _checker = staticmethod(check_cycle_set)
    kind = "cycle set"
    __slots__ = ()


class RackTable(_Table):
    """``r[i][j] = i▷j``."""

    _checker = staticmethod(check_rack)
    kind = "rack"
    __slots__ = ()

    def is_quandle(self) -> bool:
        return is_quandle(self)

    def is_trivial(self) -> bool:
        return bool(np.all(self.z == np.arange(self.n)[None, :]))


class SkewCycleSet:
    """A pair ``(m, r)``: the operation ``·`` and a rack ``▷`` compatible with it."""

    __slots__ = ("m", "r")

    def __init__(self, m, r, *, check: bool = True):
        zm = as_zero_based(m.z + 1 if isinstance(m, _Table) else m)
        rack = r if isinstance(r, RackTable) else RackTable(r, check=check)
        if check:
            res = check_skew_cycle_set(zm + 1, rack.z + 1)
            if not res:
                raise ValueError(f"not a valid skew cycle set: {res.violation}")
        self.m = CycleSetTable.from_zero_based(zm)
        self.r = rack

    @classmethod
    def from_zero_based(cls, zm, zr) -> "SkewCycleSet":
        s = object.__new__(cls)
        s.m = CycleSetTable.from_zero_based(zm)
        s.r = RackTable.from_zero_based(zr)
        return s

    @property
    def n(self) -> int:
        return self.m.n

    def is_involutive(self) -> bool:
        return self.r.is_trivial()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SkewCycleSet) and self.m == other.m and self.r == other.r

    def __hash__(self) -> int:
        return hash((self.m.z.tobytes(), self.r.z.tobytes()))

    def __repr__(self) -> str:
        return f"SkewCycleSet(m={self.m.rows()}, r={self.r.rows()})"


def rows_of(table: Sequence[Sequence[int]]) -> list[list[int]]:
    return [list(map(int, row)) for row in table]
