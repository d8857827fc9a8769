"""Permutations of {1..n}, conjugacy classes of Sym_n and centralizers.

Everything here speaks 1-based points.  Internally a permutation is a tuple of
images, ``images[x - 1] = p(x)``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Permutation",
    "CycleType",
    "compose",
    "inverse",
    "identity",
    "partitions",
    "class_representative",
    "class_representatives",
    "conjugator",
    "CentralizerGroup",
    "PermGroup",
    "centralizer",
    "centralizer_order",
    "support_filter",
]


class Permutation:
    """A bijection of {1..n}.

    >>> p = Permutation.parse("(1 2 3)", 4)
    >>> p(1), p(3), p(4)
    (2, 1, 4)
    >>> str(p.inverse())
    '(1 3 2)'
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(tuple(range(1, n + 1)))

    @classmethod
    def from_zero_based(cls, images: Iterable[int]) -> "Permutation":
        return cls(int(x) + 1 for x in images)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        img = list(range(1, n + 1))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = [int(x) for x in cyc]
            for x in cyc:
                if not 1 <= x <= n:
                    raise ValueError(f"point {x} outside 1..{n}")
                if x in seen:
                    raise ValueError(f"point {x} appears twice in cycle notation")
                seen.add(x)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return cls(img)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Permutation":
        """Parse cycle notation such as ``"(1 2 7 8)(3 4 5 6)"`` or ``"id"``.

        Cycles may be written with spaces or commas; when every point is a single
        character (as in ``"(16345278)"``) separators may be omitted, with ``a``,
        ``b``, ... standing for 10, 11, ...  If ``n`` is omitted the largest
        point mentioned is used.
        """
        s = text.strip()
        if s in ("", "id", "()"):
            return cls.identity(1 if n is None else n)
        if not re.fullmatch(r"(\([^()]*\)\s*)+", s):
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in re.findall(r"\(([^()]*)\)", s):
            body = body.strip()
            if not body:
                continue
            if re.search(r"[\s,]", body):
                pts = [int(t) for t in re.split(r"[\s,]+", body) if t]
            else:
                pts = [int(ch, 36) for ch in body]
            cycles.append(pts)
        top = max((max(c) for c in cycles if c), default=1)
        if n is None:
            n = top
        elif top > n:
            raise ValueError(f"point {top} outside 1..{n}")
        return cls.from_cycles(cycles, n)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __len__(self) -> int:
        return len(self.images)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __mul__(self, other: "Permutation") -> "Permutation":
        # p * q is "p after q"
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Permutation.parse({str(self)!r}, {self.n})"

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "id"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def zero_based(self) -> tuple[int, ...]:
        return tuple(x - 1 for x in self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.images, 1):
            inv[x - 1] = i
        return Permutation._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, 1))

    def cycles(self, singletons: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its smallest point, ordered by that point."""
        seen = [False] * (self.n + 1)
        out = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x - 1]
            if len(cyc) > 1 or singletons:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> "CycleType":
        return CycleType(len(c) for c in self.cycles(singletons=True))

    def support(self) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self.images, 1) if i != x)

    def order(self) -> int:
        return math.lcm(*self.cycle_type().parts) if self.n else 1


class CycleType:
    """Partition of n given by the cycle lengths of a permutation, parts descending."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int]):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p <= 0 for p in parts):
            raise ValueError("cycle lengths must be positive")
        self.parts = parts

    @property
    def n(self) -> int:
        return sum(self.parts)

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CycleType) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __lt__(self, other: "CycleType") -> bool:
        return self.parts < other.parts

    def __repr__(self) -> str:
        return f"CycleType({list(self.parts)})"


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Return ``a∘b``, i.e. ``x -> a(b(x))``."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} != {b.n}")
    ai = a.images
    return Permutation._trusted(tuple(ai[x - 1] for x in b.images))


def inverse(a: Permutation) -> Permutation:
    return a.inverse()


def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def partitions(n: int) -> list[tuple[int, ...]]:
    """All partitions of n, parts descending, in reverse lexicographic order."""

    def gen(rest: int, largest: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for p in range(min(rest, largest), 0, -1):
            for tail in gen(rest - p, p):
                yield (p,) + tail

    return list(gen(n, n))


def class_representative(cycle_type: CycleType | Sequence[int]) -> Permutation:
    """Canonical member of a conjugacy class: consecutive cycles, longest first.

    The partition (3, 2) of 5 gives (1 2 3)(4 5).
    """
    parts = cycle_type.parts if isinstance(cycle_type, CycleType) else CycleType(cycle_type).parts
    cycles = []
    start = 1
    for p in parts:
        cycles.append(range(start, start + p))
        start += p
    return Permutation.from_cycles(cycles, start - 1)


def class_representatives(n: int) -> list[Permutation]:
    """One representative per conjugacy class of Sym_n, ``len == p(n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    return [class_representative(p) for p in partitions(n)]


def conjugator(t: Permutation, t1: Permutation) -> Permutation:
    """Some ``g`` with ``g^-1 t g = t1``; raises if the two are not conjugate.

    Cycles of equal length are matched in order: g sends the k-th point of a
    cycle of ``t1`` to the k-th point of the matching cycle of ``t``.
    """
    if t.cycle_type() != t1.cycle_type():
        raise ValueError("permutations are not conjugate")
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for c in t.cycles(singletons=True):
        by_len.setdefault(len(c), []).append(c)
    img = [0] * t.n
    for c1 in t1.cycles(singletons=True):
        c = by_len[len(c1)].pop(0)
        for a, b in zip(c1, c):
            img[a - 1] = b
    return Permutation._trusted(tuple(img))


def centralizer_order(t: Permutation | CycleType) -> int:
    ct = t.cycle_type() if isinstance(t, Permutation) else t
    order = 1
    for length, mult in ct.multiplicities().items():
        order *= length**mult * math.factorial(mult)
    return order


class PermGroup:
    """A permutation group held as an explicit set of elements."""

    def __init__(self, n: int, elements: Iterable[Permutation], generators: Sequence[Permutation] | None = None):
        self.n = n
        self._elements = sorted(set(elements))
        if not self._elements:
            self._elements = [Permutation.identity(n)]
        self._set = set(self._elements)
        self._generators = list(generators) if generators is not None else None

    @property
    def order(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def __contains__(self, g: Permutation) -> bool:
        return g in self._set

    @property
    def generators(self) -> list[Permutation]:
        if self._generators is None:
            self._generators = _greedy_generators(self._elements, self.n)
        return list(self._generators)


def _greedy_generators(elements: Sequence[Permutation], n: int) -> list[Permutation]:
    gens: list[Permutation] = []
    span = {Permutation.identity(n)}
    for g in elements:
        if g not in span:
            gens.append(g)
            span = _closure(gens, n)
    return gens


def _closure(gens: Sequence[Permutation], n: int) -> set[Permutation]:
    ident = Permutation.identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


class CentralizerGroup:
    """The centralizer C(T) of a permutation T in Sym_n.

    C(T) is a direct product over cycle lengths l of the wreath products
    C_l wr Sym_m (m = number of l-cycles).  Elements are streamed from that
    description, never stored, so ``order`` and ``generators`` stay cheap even
    when T is the identity.
    """

    def __init__(self, t: Permutation):
        self.t = t
        self.n = t.n
        self._by_len: dict[int, list[tuple[int, ...]]] = {}
        for c in t.cycles(singletons=True):
            self._by_len.setdefault(len(c), []).append(c)

    @property
    def order(self) -> int:
        return centralizer_order(self.t)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, g: Permutation) -> bool:
        return g.n == self.n and compose(g, self.t) == compose(self.t, g)

    @property
    def generators(self) -> list[Permutation]:
        n = self.n
        gens = []
        for length, cycs in sorted(self._by_len.items()):
            m = len(cycs)
            if length > 1:
                gens.append(Permutation.from_cycles([cycs[0]], n))
            if m >= 2:
                # swap the first two l-cycles pointwise
                img = list(range(1, n + 1))
                for a, b in zip(cycs[0], cycs[1]):
                    img[a - 1], img[b - 1] = b, a
                gens.append(Permutation._trusted(tuple(img)))
            if m >= 3:
                # cyclically shift all l-cycles
                img = list(range(1, n + 1))
                for s in range(m):
                    for a, b in zip(cycs[s], cycs[(s + 1) % m]):
                        img[a - 1] = b
                gens.append(Permutation._trusted(tuple(img)))
        return gens

    def __iter__(self) -> Iterator[Permutation]:
        n = self.n
        blocks = sorted(self._by_len.items())
        yield from self._iter_blocks(blocks, 0, [0] * n)

    def _iter_blocks(self, blocks, idx, img):
        if idx == len(blocks):
            yield Permutation._trusted(tuple(img))
            return
        length, cycs = blocks[idx]
        m = len(cycs)
        for perm, shifts in itertools.product(itertools.permutations(range(m)), itertools.product(range(length), repeat=m)):
            for s, c in enumerate(cycs):
                target = cycs[perm[s]]
                sh = shifts[s]
                for pos, x in enumerate(c):
                    img[x - 1] = target[(pos + sh) % length]
            yield from self._iter_blocks(blocks, idx + 1, img)


def centralizer(t: Permutation) -> CentralizerGroup:
    return CentralizerGroup(t)


@lru_cache(maxsize=64)
def _small_support(n: int, k: int) -> tuple[Permutation, ...]:
    """Every non-identity permutation of Sym_n moving at most k points."""
    out = []
    for size in range(2, min(k, n) + 1):
        for pts in itertools.combinations(range(1, n + 1), size):
            for imgs in itertools.permutations(pts):
                if any(a == b for a, b in zip(pts, imgs)):
                    continue
                img = list(range(1, n + 1))
                for a, b in zip(pts, imgs):
                    img[a - 1] = b
                out.append(Permutation._trusted(tuple(img)))
    return tuple(out)


def support_filter(group: CentralizerGroup | PermGroup, k: int = 3) -> list[Permutation]:
    """Elements of ``group`` moving at most ``k`` points, plus its generators.

    Duplicates and the identity are dropped.  Small-support elements are found
    by scanning the (small) set of such permutations in Sym_n and testing
    membership, so large groups are never iterated.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    out: list[Permutation] = []
    seen: set[Permutation] = set()
    for g in _small_support(group.n, k):
        if g in group and g not in seen:
            seen.add(g)
            out.append(g)
    for g in group.generators:
        if not g.is_identity() and g not in seen:
            seen.add(g)
            out.append(g)
    return out
