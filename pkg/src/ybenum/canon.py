"""Relabeling action on tables, lex-leader tests, canonical forms, isomorphism.

The action is ``(M^g)[i][j] = g^-1(M[g(i)][g(j)])``.  With ``compose(g, h) =
g∘h`` it is a right action: ``act(act(M, g), h) == act(M, compose(g, h))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .perm import CentralizerGroup, CycleType, Permutation, class_representative, conjugator
from .tables import CycleSetTable, RackTable, SkewCycleSet, as_zero_based

__all__ = [
    "LabeledOrbitKey",
    "act",
    "act_zero_based",
    "is_lex_min",
    "canonical_form",
    "canonical_skew_form",
    "canonical_table",
    "canonical_skew",
    "are_isomorphic",
    "rack_automorphisms",
    "centralizer_array",
]


@dataclass(frozen=True, order=True)
class LabeledOrbitKey:
    """Isomorphism invariant: diagonal cycle type plus the lex-minimal relabeled matrix.

    ``canon`` holds the flattened 0-based entries (for skew pairs: the rack
    block followed by the cycle-set block).
    """

    diag_class: tuple[int, ...]
    canon: bytes

    @property
    def n(self) -> int:
        return sum(self.diag_class)

    def matrices(self) -> list[np.ndarray]:
        """The canonical matrices, 1-based."""
        n = self.n
        flat = np.frombuffer(self.canon, dtype=np.uint8).astype(np.int64) + 1
        return [blk.reshape(n, n) for blk in flat.reshape(-1, n * n)]


def _perm_arrays(g: Permutation) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(g.zero_based(), dtype=np.intp)
    inv = np.empty_like(a)
    inv[a] = np.arange(len(a))
    return a, inv


def act_zero_based(z: np.ndarray, g: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    return ginv[z[np.ix_(g, g)]].astype(np.uint8)


def act(m, g: Permutation) -> np.ndarray:
    """Return ``M^g`` as a 1-based matrix."""
    z = as_zero_based(m)
    if g.n != z.shape[0]:
        raise ValueError(f"size mismatch: table {z.shape[0]}, permutation {g.n}")
    a, inv = _perm_arrays(g)
    return act_zero_based(z, a, inv).astype(np.int64) + 1


def is_lex_min(m, S: Iterable[Permutation]) -> bool:
    """True iff ``M <=lex M^g`` for every g in S (row-major comparison)."""
    z = as_zero_based(m)
    flat = z.ravel()
    for g in S:
        a, inv = _perm_arrays(g)
        img = act_zero_based(z, a, inv).ravel()
        diff = np.nonzero(flat != img)[0]
        if len(diff) and img[diff[0]] < flat[diff[0]]:
            return False
    return True


@lru_cache(maxsize=128)
def _centralizer_cached(images: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    t = Permutation._trusted(images)
    n = t.n
    order = CentralizerGroup(t).order
    arr = np.empty((order, n), dtype=np.intp)
    for k, g in enumerate(CentralizerGroup(t)):
        arr[k] = g.images
    arr -= 1
    inv = np.empty_like(arr)
    rows = np.arange(order)[:, None]
    inv[rows, arr] = np.arange(n)[None, :]
    return arr, inv


def centralizer_array(t: Permutation) -> tuple[np.ndarray, np.ndarray]:
    """All elements of C(t) and their inverses as ``(order, n)`` 0-based arrays."""
    return _centralizer_cached(t.images)


def _lex_min_images(blocks: Sequence[np.ndarray], cands: np.ndarray, inv: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lex-minimal ``concat(B^g for B in blocks)`` over the candidate relabelings.

    Candidates are filtered position by position, so only the relabelings that
    tie with the best prefix so far are carried forward.  Returns the minimal
    flattened image and the indices of the candidates attaining it.
    """
    n = blocks[0].shape[0]
    idx = np.arange(len(cands))
    out = np.empty(len(blocks) * n * n, dtype=np.uint8)
    pos = 0
    for z in blocks:
        zi = z.astype(np.intp)
        for i in range(n):
            for j in range(n):
                g = cands[idx]
                v = inv[idx, zi[g[:, i], g[:, j]]]
                best = v.min()
                out[pos] = best
                pos += 1
                if len(idx) > 1:
                    idx = idx[v == best]
    return out, idx


def _diag_perm(z: np.ndarray) -> Permutation:
    d = np.diagonal(z)
    if len(np.unique(d)) != len(d):
        raise ValueError("diagonal is not a permutation")
    return Permutation._trusted(tuple(int(x) + 1 for x in d))


def _normalizer(z: np.ndarray) -> tuple[Permutation, np.ndarray, np.ndarray]:
    """γ moving the diagonal of z to its class representative T1, and C(T1)."""
    t = _diag_perm(z)
    t1 = class_representative(t.cycle_type())
    gamma = conjugator(t, t1)
    cands, inv = centralizer_array(t1)
    return gamma, cands, inv


def _canonical_zero_based(blocks: Sequence[np.ndarray]) -> tuple[CycleType, np.ndarray, np.ndarray]:
    lead = blocks[0]
    gamma, cands, inv = _normalizer(lead)
    a, ainv = _perm_arrays(gamma)
    moved = [act_zero_based(z, a, ainv) for z in blocks]
    flat, _ = _lex_min_images(moved, cands, inv)
    return _diag_perm(lead).cycle_type(), flat, moved[0]


def canonical_form(m) -> LabeledOrbitKey:
    """Isomorphism-invariant key of a table whose diagonal is a permutation.

    The diagonal T is first conjugated to its class representative T1 by some
    γ; the key is then the lex-least ``(M^γ)^c`` over c in C(T1).  Every table
    in the isomorphism class that has diagonal T1 is of this form, so the
    minimum does not depend on which member of the class was given.
    """
    z = as_zero_based(m)
    ct, flat, _ = _canonical_zero_based([z])
    return LabeledOrbitKey(ct.parts, flat.tobytes())


def canonical_skew_form(sc: SkewCycleSet) -> LabeledOrbitKey:
    """Key for a skew pair: minimize (rack block, cycle-set block) under one relabeling."""
    ct, flat, _ = _canonical_zero_based([sc.r.z, sc.m.z])
    return LabeledOrbitKey(ct.parts, flat.tobytes())


def canonical_table(m: CycleSetTable | RackTable):
    """The canonical representative of ``m``'s class, of the same table type."""
    z = m.z if hasattr(m, "z") else as_zero_based(m)
    key = canonical_form(z + 1)
    cls = type(m) if isinstance(m, (CycleSetTable, RackTable)) else CycleSetTable
    return cls.from_zero_based(np.frombuffer(key.canon, dtype=np.uint8).reshape(z.shape))


def canonical_skew(sc: SkewCycleSet) -> SkewCycleSet:
    key = canonical_skew_form(sc)
    n = sc.n
    flat = np.frombuffer(key.canon, dtype=np.uint8)
    return SkewCycleSet.from_zero_based(flat[n * n:].reshape(n, n), flat[: n * n].reshape(n, n))


def are_isomorphic(a, b) -> bool:
    """Whether two tables (or two skew pairs) are related by a relabeling."""
    if isinstance(a, SkewCycleSet) or isinstance(b, SkewCycleSet):
        if a.n != b.n:
            raise ValueError("size mismatch")
        return canonical_skew_form(a) == canonical_skew_form(b)
    za, zb = as_zero_based(a), as_zero_based(b)
    if za.shape != zb.shape:
        raise ValueError(f"size mismatch: {za.shape[0]} != {zb.shape[0]}")
    return canonical_form(za + 1) == canonical_form(zb + 1)


def rack_automorphisms(r) -> list[Permutation]:
    """All g with ``act(r, g) == r``.

    Such g must commute with the diagonal of r, so only C(diagonal) is scanned.
    """
    z = as_zero_based(r)
    t = _diag_perm(z)
    cands, inv = centralizer_array(t)
    idx = np.arange(len(cands))
    n = z.shape[0]
    zi = z.astype(np.intp)
    for i in range(n):
        for j in range(n):
            g = cands[idx]
            v = inv[idx, zi[g[:, i], g[:, j]]]
            idx = idx[v == zi[i, j]]
    return sorted(Permutation._trusted(tuple(int(x) + 1 for x in cands[k])) for k in idx)
