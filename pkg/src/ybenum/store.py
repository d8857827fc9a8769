"""The ``ybdb`` text format for databases of tables and solutions.

Line 1 is ``#ybdb v1 kind=<kind> n=<n> [count=<c>]``, optionally followed on
the same line by ``partial=1`` and ``producer=<token>``.  Each record is n lines
of n space-separated 1-based integers; skew cycle sets take 2n lines (rack
block, then cycle-set block) and solutions 2n lines (σ_1..σ_n, then
τ_1..τ_n, each line the images of 1..n).  Records are separated by one blank
line.  ``.gz``, ``.bz2`` and ``.xz`` names are compressed transparently.
"""

from __future__ import annotations

import bz2
import gzip
import io
import lzma
import os
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

import numpy as np

from .tables import (
    CycleSetTable,
    RackTable,
    SkewCycleSet,
    check_cycle_set,
    check_rack,
    check_skew_cycle_set,
)
from .yb import SolutionMap, verify_ybe

__all__ = [
    "FORMAT_VERSION",
    "KINDS",
    "DatasetHeader",
    "DatasetError",
    "write_dataset",
    "read_dataset",
    "load_dataset",
    "dataset_stats",
    "record_key",
    "format_stats",
]

FORMAT_VERSION = 1
KINDS = ("cycleset", "rack", "skewcycleset", "solution")
_TYPES = {"cycleset": CycleSetTable, "rack": RackTable, "skewcycleset": SkewCycleSet, "solution": SolutionMap}


class DatasetError(ValueError):
    """Malformed file, out-of-range entry or axiom failure, with the 1-based record index."""

    def __init__(self, message: str, record: int | None = None):
        super().__init__(message if record is None else f"record {record}: {message}")
        self.record = record


@dataclass
class DatasetHeader:
    kind: str
    n: int
    count: int | None = None
    producer: str = ""
    partial: bool = False
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if any(ch.isspace() for ch in self.producer):
            raise ValueError("producer must not contain whitespace")

    def line(self) -> str:
        parts = [f"#ybdb v{self.format_version}", f"kind={self.kind}", f"n={self.n}"]
        if self.count is not None:
            parts.append(f"count={self.count}")
        if self.partial:
            parts.append("partial=1")
        if self.producer:
            parts.append(f"producer={self.producer}")
        return " ".join(parts)

    @classmethod
    def parse(cls, line: str) -> "DatasetHeader":
        toks = line.split()
        if len(toks) < 3 or toks[0] != "#ybdb" or not toks[1].startswith("v"):
            raise DatasetError(f"malformed header: {line.strip()!r}")
        try:
            version = int(toks[1][1:])
            kv = dict(t.split("=", 1) for t in toks[2:])
            hdr = cls(
                kind=kv["kind"],
                n=int(kv["n"]),
                count=int(kv["count"]) if "count" in kv else None,
                producer=kv.get("producer", ""),
                partial=kv.get("partial", "0") == "1",
                format_version=version,
            )
        except (KeyError, ValueError) as exc:
            raise DatasetError(f"malformed header: {line.strip()!r} ({exc})") from None
        if version != FORMAT_VERSION:
            raise DatasetError(f"unsupported format version {version}")
        return hdr


def _open(path, mode: str) -> IO[str]:
    p = os.fspath(path)
    if p.endswith(".gz"):
        return gzip.open(p, mode + "t", encoding="utf-8")
    if p.endswith(".bz2"):
        return bz2.open(p, mode + "t", encoding="utf-8")
    if p.endswith(".xz"):
        return lzma.open(p, mode + "t", encoding="utf-8")
    return open(p, mode, encoding="utf-8", newline="\n")


def _block(z: np.ndarray) -> list[str]:
    return [" ".join(str(int(v) + 1) for v in row) for row in z]


def _record_lines(rec, kind: str, n: int) -> list[str]:
    if not isinstance(rec, _TYPES[kind]):
        raise TypeError(f"expected {_TYPES[kind].__name__} for kind {kind}, got {type(rec).__name__}")
    if rec.n != n:
        raise ValueError(f"record of size {rec.n} in a dataset of size {n}")
    if kind in ("cycleset", "rack"):
        return _block(rec.z)
    if kind == "skewcycleset":
        return _block(rec.r.z) + _block(rec.m.z)
    return _block(rec.s) + _block(rec.t)


def record_key(rec):
    """Canonical key used to order records (isomorphic records share a key)."""
    from .canon import canonical_form, canonical_skew_form
    from .yb import solution_to_skew_cycle_set

    if isinstance(rec, (CycleSetTable, RackTable)):
        return canonical_form(rec.z + 1)
    if isinstance(rec, SkewCycleSet):
        return canonical_skew_form(rec)
    return canonical_skew_form(solution_to_skew_cycle_set(rec))


def write_dataset(header: DatasetHeader, records: Iterable, destination, *, sort: bool = False) -> int:
    """Write records in ybdb format; returns the number written.

    When ``header.count`` is None the records are materialized first so the
    header can carry the count.  ``sort`` orders records by canonical key.
    """
    if sort:
        records = sorted(records, key=record_key)
    if header.count is None:
        records = list(records)
        header = DatasetHeader(**{**header.__dict__, "count": len(records)})
    written = 0
    close = False
    if isinstance(destination, (str, os.PathLike)):
        fh = _open(destination, "w")
        close = True
    else:
        fh = destination
    try:
        fh.write(header.line() + "\n")
        for rec in records:
            if written:
                fh.write("\n")
            fh.write("\n".join(_record_lines(rec, header.kind, header.n)) + "\n")
            written += 1
    finally:
        if close:
            fh.close()
    if header.count is not None and written != header.count:
        raise DatasetError(f"header count {header.count} but {written} records written")
    return written


def _parse_block(lines: list[str], n: int, index: int) -> np.ndarray:
    try:
        a = np.array([[int(tok) for tok in ln.split()] for ln in lines], dtype=np.int64)
    except ValueError:
        raise DatasetError("non-integer entry", index) from None
    if a.shape != (len(lines), n):
        raise DatasetError(f"expected rows of {n} entries", index)
    if a.min() < 1 or a.max() > n:
        raise DatasetError(f"entry outside 1..{n}", index)
    return (a - 1).astype(np.uint8)


def _build(kind: str, lines: list[str], n: int, index: int, validate: bool):
    rows_expected = n if kind in ("cycleset", "rack") else 2 * n
    if len(lines) != rows_expected:
        raise DatasetError(f"expected {rows_expected} lines, found {len(lines)}", index)
    if kind in ("cycleset", "rack"):
        z = _parse_block(lines, n, index)
        if validate:
            res = (check_cycle_set if kind == "cycleset" else check_rack)(z + 1)
            if not res:
                raise DatasetError(f"axiom violation: {res.violation}", index)
        return _TYPES[kind].from_zero_based(z)
    a = _parse_block(lines[:n], n, index)
    b = _parse_block(lines[n:], n, index)
    if kind == "skewcycleset":
        if validate:
            res = check_skew_cycle_set(b + 1, a + 1)
            if not res:
                raise DatasetError(f"axiom violation: {res.violation}", index)
        return SkewCycleSet.from_zero_based(b, a)
    if validate:
        for row in np.vstack([a, b]):
            if len(np.unique(row)) != n:
                raise DatasetError("σ/τ entry is not a permutation", index)
    sol = SolutionMap.from_arrays(a, b)
    if validate:
        res = verify_ybe(sol)
        if not res:
            raise DatasetError(f"not a solution ({res.reason}, witness {res.witness})", index)
    return sol


def _iter_records(fh: IO[str], header: DatasetHeader, validate: bool) -> Iterator:
    try:
        block: list[str] = []
        index = 0
        for raw in fh:
            line = raw.strip()
            if not line:
                if block:
                    index += 1
                    yield _build(header.kind, block, header.n, index, validate)
                    block = []
                continue
            if line.startswith("#"):
                continue
            block.append(line)
        if block:
            index += 1
            yield _build(header.kind, block, header.n, index, validate)
        if header.count is not None and index != header.count and not header.partial:
            raise DatasetError(f"header announces {header.count} records, file has {index}")
    finally:
        fh.close()


def read_dataset(source, *, validate: bool = True) -> tuple[DatasetHeader, Iterator]:
    """Open a ybdb file; returns the header and a lazy record iterator.

    Records are re-checked against their axioms unless ``validate`` is False.
    """
    fh = _open(source, "r") if isinstance(source, (str, os.PathLike)) else source
    first = fh.readline()
    if not first:
        fh.close()
        raise DatasetError("empty file: missing header")
    header = DatasetHeader.parse(first)
    return header, _iter_records(fh, header, validate)


def load_dataset(source, *, validate: bool = True) -> tuple[DatasetHeader, list]:
    header, it = read_dataset(source, validate=validate)
    return header, list(it)


STAT_FIELDS = (
    "solutions",
    "involutive",
    "non_involutive",
    "square_free",
    "non_square_free",
    "indecomposable",
    "multipermutation",
    "non_multipermutation",
    "irretractable",
    "indecomposable_multipermutation",
    "gi_counterexamples",
    "biquandles_non_involutive",
    "racks",
    "quandles",
)


def dataset_stats(source, *, validate: bool = True) -> Counter:
    """Counts of solutions per classification predicate (rows of the paper-style tables).

    For involutive records every predicate applies; for non-involutive ones
    only ``non_involutive`` and ``biquandles_non_involutive`` are counted.
    Rack datasets report ``racks`` and ``quandles``.
    """
    from .props import classify

    header, records = read_dataset(source, validate=validate) if not isinstance(source, tuple) else source
    stats: Counter = Counter({k: 0 for k in STAT_FIELDS})
    for rec in records:
        if header.kind == "rack":
            stats["racks"] += 1
            stats["quandles"] += rec.is_quandle()
            continue
        c = classify(rec, group_order=False)
        stats["solutions"] += 1
        if not c.involutive:
            stats["non_involutive"] += 1
            stats["biquandles_non_involutive"] += c.biquandle
            continue
        mp = c.multipermutation_level is not None
        stats["involutive"] += 1
        stats["square_free"] += c.square_free
        stats["non_square_free"] += not c.square_free
        stats["indecomposable"] += c.indecomposable
        stats["multipermutation"] += mp
        stats["non_multipermutation"] += not mp
        stats["irretractable"] += c.irretractable
        stats["indecomposable_multipermutation"] += c.indecomposable and mp
        stats["gi_counterexamples"] += c.gi_counterexample
    return stats


def format_stats(stats: Counter, header: DatasetHeader | None = None) -> str:
    out = io.StringIO()
    if header is not None:
        out.write(f"kind {header.kind}\nn {header.n}\n")
    fields = ("racks", "quandles") if header is not None and header.kind == "rack" else STAT_FIELDS[:12]
    for k in fields:
        out.write(f"{k.replace('_', '-')} {stats[k]}\n")
    return out.getvalue()
