"""Solutions ``r(x, y) = (σ_x(y), τ_y(x))`` and their (skew) cycle-set encodings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .perm import Permutation
from .tables import CycleSetTable, SkewCycleSet

__all__ = [
    "SolutionMap",
    "YBEResult",
    "verify_ybe",
    "is_involutive",
    "cycle_set_to_solution",
    "solution_to_cycle_set",
    "solution_to_skew_cycle_set",
    "skew_cycle_set_to_solution",
    "flip",
]


class SolutionMap:
    """A map on X×X given by the two families σ_x and τ_y.

    ``sigma`` and ``tau`` are stored 0-based as arrays ``s[x, y] = σ_x(y)`` and
    ``t[y, x] = τ_y(x)``.  Construct from permutations (1-based) or through
    :meth:`from_arrays`.
    """

    __slots__ = ("s", "t")

    def __init__(self, sigma: Sequence[Permutation | Sequence[int]], tau: Sequence[Permutation | Sequence[int]]):
        if len(sigma) != len(tau):
            raise ValueError("sigma and tau must have the same length")
        n = len(sigma)

        def arr(fam):
            rows = [p.images if isinstance(p, Permutation) else tuple(p) for p in fam]
            a = np.asarray(rows, dtype=np.int64)
            if a.shape != (n, n):
                raise ValueError(f"expected {n} permutations of 1..{n}")
            for row in rows:
                Permutation(row)  # raises on non-bijections
            return (a - 1).astype(np.uint8)

        self.s = arr(sigma)
        self.t = arr(tau)
        self.s.flags.writeable = False
        self.t.flags.writeable = False

    @classmethod
    def from_arrays(cls, s, t) -> "SolutionMap":
        obj = object.__new__(cls)
        obj.s = np.ascontiguousarray(s, dtype=np.uint8)
        obj.t = np.ascontiguousarray(t, dtype=np.uint8)
        obj.s.flags.writeable = False
        obj.t.flags.writeable = False
        return obj

    @property
    def n(self) -> int:
        return self.s.shape[0]

    @property
    def sigma(self) -> list[Permutation]:
        return [Permutation.from_zero_based(row) for row in self.s]

    @property
    def tau(self) -> list[Permutation]:
        return [Permutation.from_zero_based(row) for row in self.t]

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        return int(self.s[x - 1, y - 1]) + 1, int(self.t[y - 1, x - 1]) + 1

    def pair_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """``(a, b)`` with ``r(x, y) = (a[x, y], b[x, y])``, 0-based."""
        return self.s, self.t.T

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SolutionMap) and np.array_equal(self.s, other.s) and np.array_equal(self.t, other.t)

    def __hash__(self) -> int:
        return hash((self.s.tobytes(), self.t.tobytes()))

    def __repr__(self) -> str:
        return f"SolutionMap(n={self.n}, sigma={[str(p) for p in self.sigma]}, tau={[str(p) for p in self.tau]})"


def flip(n: int) -> SolutionMap:
    """``r(x, y) = (y, x)``."""
    ident = np.tile(np.arange(n, dtype=np.uint8), (n, 1))
    return SolutionMap.from_arrays(ident, ident)


@dataclass(frozen=True)
class YBEResult:
    ok: bool
    witness: tuple[int, int, int] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_ybe(sol: SolutionMap) -> YBEResult:
    """Check that r is a bijection of X×X satisfying the braid relation.

    Both sides of (r×id)(id×r)(r×id) = (id×r)(r×id)(id×r) are evaluated on all
    n³ triples; on failure the first offending triple (1-based) is returned.
    """
    n = sol.n
    a, b = sol.pair_arrays()
    a = a.astype(np.int64)
    b = b.astype(np.int64)
    codes = a * n + b
    if len(np.unique(codes)) != n * n:
        return YBEResult(False, None, "r is not bijective on pairs")
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")

    def r12(u, v, w):
        return a[u, v], b[u, v], w

    def r23(u, v, w):
        return u, a[v, w], b[v, w]

    lhs = r12(*r23(*r12(x, y, z)))
    rhs = r23(*r12(*r23(x, y, z)))
    bad = (lhs[0] != rhs[0]) | (lhs[1] != rhs[1]) | (lhs[2] != rhs[2])
    if bad.any():
        i, j, k = (int(v) + 1 for v in np.argwhere(bad)[0])
        return YBEResult(False, (i, j, k), "braid relation fails")
    return YBEResult(True)


def is_involutive(sol: SolutionMap) -> bool:
    a, b = sol.pair_arrays()
    return bool(np.all(a[a, b] == np.arange(sol.n)[:, None]) and np.all(b[a, b] == np.arange(sol.n)[None, :]))


def _row_inverse(z: np.ndarray) -> np.ndarray:
    # inv[x, v] = the y with z[x, y] = v
    n = z.shape[0]
    inv = np.empty_like(z)
    inv[np.arange(n)[:, None], z] = np.arange(n, dtype=z.dtype)[None, :]
    return inv


def cycle_set_to_solution(m: CycleSetTable) -> SolutionMap:
    """The involutive solution ``r(x, y) = ((y*x)·y, y*x)``; ``τ_y = φ_y^-1``."""
    z = m.z
    n = z.shape[0]
    tau = _row_inverse(z)  # tau[y, x] = y*x
    # sigma[x, y] = M[y*x, y]
    sigma = z[tau.T, np.arange(n)[None, :]]
    return SolutionMap.from_arrays(sigma, tau)


def solution_to_cycle_set(sol: SolutionMap) -> CycleSetTable:
    """``x·y = τ_x^-1(y)``; rejects non-involutive solutions."""
    if not is_involutive(sol):
        raise ValueError("solution is not involutive; use solution_to_skew_cycle_set")
    return CycleSetTable.from_zero_based(_row_inverse(sol.t))


def solution_to_skew_cycle_set(sol: SolutionMap) -> SkewCycleSet:
    """``x·y = τ_x^-1(y)`` and ``x▷y = τ_x σ_{τ_y^-1(x)}(y)``."""
    n = sol.n
    s, t = sol.s, sol.t
    m = _row_inverse(t)
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    # m[y, x] = τ_y^-1(x)
    u = m[y, x]
    r = t[x, s[u, y]]
    return SkewCycleSet.from_zero_based(m, r)


def skew_cycle_set_to_solution(sc: SkewCycleSet) -> SolutionMap:
    """``r(x, y) = ((y*x)·((y*x)▷y), y*x)``."""
    zm, zr = sc.m.z, sc.r.z
    n = zm.shape[0]
    tau = _row_inverse(zm)  # tau[y, x] = y*x
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    w = tau[y, x]  # w[x, y] = y*x
    sigma = zm[w, zr[w, y]]
    return SolutionMap.from_arrays(sigma, tau)
