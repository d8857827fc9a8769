"""Command-line front end: ``ybenum <subcommand> ...``.

Exit codes: 0 success, 1 verification or data failure, 2 usage error,
3 search budget exceeded (the partial output is flagged in its header).
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from typing import Sequence

from . import __version__
from .canon import are_isomorphic
from .enumeration import (
    BudgetExceeded,
    SearchConfig,
    _skew_enumeration,
    default_jobs,
    enumerate_cycle_sets,
    enumerate_racks,
)
from .perm import Permutation
from .props import classify
from .store import (
    DatasetError,
    DatasetHeader,
    dataset_stats,
    format_stats,
    read_dataset,
    record_key,
    write_dataset,
)
from .tables import RackTable, SkewCycleSet, trivial_table
from .yb import (
    cycle_set_to_solution,
    is_involutive,
    skew_cycle_set_to_solution,
    solution_to_cycle_set,
    solution_to_skew_cycle_set,
    verify_ybe,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

PRODUCER = f"ybenum-{__version__}"


class UsageError(Exception):
    pass


def _symmetry(value: str) -> tuple[str, int]:
    if value in ("auto", "full", "gens"):
        return value, 3
    m = re.fullmatch(r"support(\d*)", value)
    if m:
        return "support", int(m.group(1) or 3)
    raise argparse.ArgumentTypeError(f"invalid symmetry mode {value!r}")


def _progress_printer(stream, every: float = 5.0):
    last = [time.perf_counter()]

    def hook(stats, done, total):
        now = time.perf_counter()
        if now - last[0] >= every or done == total:
            last[0] = now
            print(
                f"[{done}/{total} tasks] nodes={stats.nodes} prunes={stats.constraint_prunes}"
                f"+{stats.symmetry_prunes} raw={stats.raw_outputs}",
                file=stream,
                flush=True,
            )

    return hook


def _write(header: DatasetHeader, records, out: str | None) -> int:
    if out is None or out == "-":
        return write_dataset(header, records, sys.stdout)
    return write_dataset(header, records, out)


def cmd_enumerate(args) -> int:
    n = args.n
    mode, k = args.symmetry
    diag = None
    if args.diagonal is not None:
        try:
            diag = [Permutation.parse(args.diagonal, n).cycle_type()]
        except ValueError as exc:
            raise UsageError(f"--diagonal: {exc}") from None
    progress = None if args.quiet else _progress_printer(sys.stderr)
    budget = dict(node_budget=args.budget_nodes, time_budget=args.budget_secs)
    partial = False
    try:
        if args.kind in ("cycleset", "rack"):
            cfg = SearchConfig(
                n, "cycle-set" if args.kind == "cycleset" else "rack", symmetry_mode=mode, support_k=k,
                diagonal_filter=diag, jobs=args.jobs, progress=progress, **budget,
            )
            res = enumerate_cycle_sets(cfg) if args.kind == "cycleset" else enumerate_racks(cfg)
            kind = args.kind
        else:
            racks = enumerate_racks(SearchConfig(n, "rack", jobs=args.jobs)).items
            racks = [r for r in racks if not r.is_trivial()]
            if args.kind == "biquandle":
                racks = [r for r in racks if r.is_quandle()]
            if diag is not None:
                racks = [r for r in racks if Permutation(r.diagonal()).cycle_type() in diag]
            cfg = SearchConfig(
                n, "skew-over-rack", symmetry_mode=mode, support_k=k, jobs=args.jobs, progress=progress, **budget,
            )
            res = _skew_enumeration(racks, cfg)
            kind = "skewcycleset"
        items, stats = res.items, res.stats
    except BudgetExceeded as exc:
        items, stats, partial = exc.partial, exc.stats, True
        kind = "skewcycleset" if args.kind in ("noninvolutive", "biquandle") else args.kind
    header = DatasetHeader(kind, n, count=len(items), producer=PRODUCER, partial=partial)
    _write(header, items, args.out)
    print(f"{args.kind} n={n}: {len(items)} classes; {stats.summary()}", file=sys.stderr)
    if partial:
        print("budget exceeded: output is partial", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_classify(args) -> int:
    header, records = read_dataset(args.input)
    lines = []
    for i, rec in enumerate(records, 1):
        if header.kind == "rack":
            raise UsageError("classify expects solutions, cycle sets or skew cycle sets, not racks")
        lines.append(f"index={i} " + classify(rec).to_line())
    text = f"#ybclass v1 kind={header.kind} n={header.n} count={len(lines)}\n" + "".join(ln + "\n" for ln in lines)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_stats(args) -> int:
    header, records = read_dataset(args.input)
    stats = dataset_stats((header, records))
    sys.stdout.write(format_stats(stats, header))
    return EXIT_OK


def cmd_verify(args) -> int:
    header, records = read_dataset(args.input, validate=False)
    from .store import _build  # re-validate record by record to report the index

    failures = 0
    count = 0
    for i, rec in enumerate(records, 1):
        count += 1
        try:
            if header.kind in ("cycleset", "rack"):
                _build(header.kind, [" ".join(str(v + 1) for v in row) for row in rec.z], header.n, i, True)
            if header.kind == "cycleset":
                sol = cycle_set_to_solution(rec)
            elif header.kind == "skewcycleset":
                _build(header.kind, [" ".join(str(v + 1) for v in row) for row in rec.r.z]
                       + [" ".join(str(v + 1) for v in row) for row in rec.m.z], header.n, i, True)
                sol = skew_cycle_set_to_solution(rec)
            elif header.kind == "solution":
                sol = rec
            else:
                sol = None
            if sol is not None:
                res = verify_ybe(sol)
                if not res:
                    raise DatasetError(f"braid relation fails ({res.reason}, witness {res.witness})", i)
        except DatasetError as exc:
            failures += 1
            print(f"FAIL {exc}", file=sys.stderr)
    if failures:
        print(f"{failures} of {count} records failed", file=sys.stderr)
        return EXIT_FAIL
    print(f"ok: {count} records verified", file=sys.stderr)
    return EXIT_OK


def _convert(rec, src: str, dst: str):
    if src == "rack":
        raise UsageError("racks cannot be converted")
    if dst == "solution":
        if src == "cycleset":
            return cycle_set_to_solution(rec)
        if src == "skewcycleset":
            return skew_cycle_set_to_solution(rec)
        return rec
    if dst == "cycleset":
        if src == "cycleset":
            return rec
        sol = rec if src == "solution" else skew_cycle_set_to_solution(rec)
        if not is_involutive(sol):
            raise DatasetError("non-involutive solution has no cycle-set encoding")
        return solution_to_cycle_set(sol)
    # skew
    if src == "cycleset":
        return SkewCycleSet(rec, RackTable(trivial_table(rec.n)), check=False)
    if src == "solution":
        return solution_to_skew_cycle_set(rec)
    return rec


def cmd_convert(args) -> int:
    header, records = read_dataset(args.input)
    dst = {"solution": "solution", "cycleset": "cycleset", "skew": "skewcycleset"}[args.to]
    out = [_convert(rec, header.kind, dst) for rec in records]
    _write(DatasetHeader(dst, header.n, count=len(out), producer=PRODUCER), out, args.out)
    return EXIT_OK


def _nth(path: str, index: int):
    header, records = read_dataset(path)
    if index < 1:
        raise UsageError("record indices are 1-based")
    for i, rec in enumerate(records, 1):
        if i == index:
            return header, rec
    raise UsageError(f"{path} has fewer than {index} records")


def _as_skew(kind: str, rec):
    if kind == "skewcycleset":
        return rec
    return _convert(rec, kind, "skewcycleset")


def cmd_isomorphic(args) -> int:
    ha, a = _nth(args.input, args.a)
    hb, b = _nth(args.input_b or args.input, args.b)
    if ha.n != hb.n or "rack" in (ha.kind, hb.kind) and ha.kind != hb.kind:
        same = False
    elif ha.kind == hb.kind and ha.kind in ("cycleset", "rack"):
        same = are_isomorphic(a, b)
    else:
        same = are_isomorphic(_as_skew(ha.kind, a), _as_skew(hb.kind, b))
    print("yes" if same else "no")
    return EXIT_OK


def cmd_canon(args) -> int:
    from .canon import canonical_skew, canonical_table

    header, records = read_dataset(args.input)
    keyed = {}
    for rec in records:
        if header.kind in ("cycleset", "rack"):
            rec = canonical_table(rec)
        elif header.kind == "skewcycleset":
            rec = canonical_skew(rec)
        keyed.setdefault(record_key(rec), rec)
    out = [keyed[k] for k in sorted(keyed)]
    _write(DatasetHeader(header.kind, header.n, count=len(out), producer=PRODUCER), out, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ybenum", description="Enumerate and classify small set-theoretic solutions of the Yang-Baxter equation.")
    p.add_argument("--version", action="version", version=PRODUCER)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="enumerate tables up to isomorphism")
    e.add_argument("--kind", required=True, choices=["cycleset", "rack", "noninvolutive", "biquandle"])
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--diagonal", help='restrict to one conjugacy class of diagonals, e.g. "(1 2 3 4 5 6)"')
    e.add_argument("--symmetry", type=_symmetry, default=("auto", 3), help="auto | full | gens | support3")
    e.add_argument("--jobs", type=int, default=default_jobs())
    e.add_argument("--out")
    e.add_argument("--budget-nodes", type=int)
    e.add_argument("--budget-secs", type=float)
    e.add_argument("--quiet", action="store_true", help="no progress lines")
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("classify", help="per-record classification lines")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("stats", help="summary counts for a dataset")
    s.add_argument("--in", dest="input", required=True)
    s.set_defaults(func=cmd_stats)

    v = sub.add_parser("verify", help="re-check axioms and the braid relation")
    v.add_argument("--in", dest="input", required=True)
    v.set_defaults(func=cmd_verify)

    cv = sub.add_parser("convert", help="convert between encodings")
    cv.add_argument("--in", dest="input", required=True)
    cv.add_argument("--to", required=True, choices=["solution", "cycleset", "skew"])
    cv.add_argument("--out")
    cv.set_defaults(func=cmd_convert)

    i = sub.add_parser("isomorphic", help="are two records isomorphic (1-based indices)")
    i.add_argument("a", type=int)
    i.add_argument("b", type=int)
    i.add_argument("--in", dest="input", required=True)
    i.add_argument("--in-b", dest="input_b", help="take record B from this file")
    i.set_defaults(func=cmd_isomorphic)

    k = sub.add_parser("canon", help="canonical, deduplicated, sorted dataset")
    k.add_argument("--in", dest="input", required=True)
    k.add_argument("--out")
    k.set_defaults(func=cmd_canon)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "jobs", 1) is not None and getattr(args, "jobs", 1) < 1:
        print("ybenum: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        print("ybenum: --n must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ybenum: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DatasetError, FileNotFoundError) as exc:
        print(f"ybenum: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())
