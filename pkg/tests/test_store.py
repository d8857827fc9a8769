import io

import numpy as np
import pytest

from ybenum.enumeration import enumerate_noninvolutive
from ybenum.store import (
    DatasetError,
    DatasetHeader,
    dataset_stats,
    format_stats,
    load_dataset,
    read_dataset,
    record_key,
    write_dataset,
)
from ybenum.yb import cycle_set_to_solution, skew_cycle_set_to_solution


def roundtrip(tmp_path, kind, records, name="db.ybdb", **kw):
    path = tmp_path / name
    write_dataset(DatasetHeader(kind, records[0].n if records else 3, **kw), records, path)
    return load_dataset(path)


@pytest.mark.parametrize("suffix", ["", ".gz", ".bz2", ".xz"])
def test_cycle_set_round_trip(tmp_path, db, suffix):
    items = db.cycle_sets(5)
    header, back = roundtrip(tmp_path, "cycleset", items, "cs.ybdb" + suffix)
    assert back == items
    assert header.count == 88 and header.kind == "cycleset" and header.n == 5


def test_compressed_file_is_compressed(tmp_path, db):
    write_dataset(DatasetHeader("cycleset", 5), db.cycle_sets(5), tmp_path / "a.ybdb.gz")
    assert (tmp_path / "a.ybdb.gz").read_bytes()[:2] == b"\x1f\x8b"


def test_rack_skew_solution_round_trips(tmp_path, db):
    assert roundtrip(tmp_path, "rack", db.racks(4))[1] == db.racks(4)
    assert roundtrip(tmp_path, "skewcycleset", db.noninvolutive(3))[1] == db.noninvolutive(3)
    sols = [cycle_set_to_solution(m) for m in db.cycle_sets(4)]
    sols += [skew_cycle_set_to_solution(sc) for sc in db.noninvolutive(4)[:10]]
    assert roundtrip(tmp_path, "solution", sols)[1] == sols


def test_format_layout(db):
    buf = io.StringIO()
    write_dataset(DatasetHeader("cycleset", 2, producer="x-1"), db.cycle_sets(2), buf)
    text = buf.getvalue()
    lines = text.split("\n")
    assert lines[0] == "#ybdb v1 kind=cycleset n=2 count=2 producer=x-1"
    assert lines[3] == ""
    assert len([ln for ln in lines[1:] if ln]) == 4
    buf = io.StringIO()
    write_dataset(DatasetHeader("skewcycleset", 2), db.noninvolutive(2)[:1], buf)
    assert len(buf.getvalue().strip().split("\n")) == 1 + 4


def test_empty_dataset(tmp_path):
    path = tmp_path / "empty.ybdb"
    write_dataset(DatasetHeader("cycleset", 4), [], path)
    header, records = load_dataset(path)
    assert header.count == 0 and records == []
    assert dataset_stats(path)["solutions"] == 0


def test_empty_file_is_an_error(tmp_path):
    path = tmp_path / "nothing.ybdb"
    path.write_text("")
    with pytest.raises(DatasetError):
        read_dataset(path)


def test_sorted_write(tmp_path, db):
    items = list(reversed(db.cycle_sets(4)))
    path = tmp_path / "s.ybdb"
    write_dataset(DatasetHeader("cycleset", 4), items, path, sort=True)
    back = load_dataset(path)[1]
    assert back == db.cycle_sets(4)
    assert [record_key(r) for r in back] == sorted(record_key(r) for r in back)


def _corrupt(tmp_path, db, fn):
    path = tmp_path / "c.ybdb"
    write_dataset(DatasetHeader("cycleset", 3), db.cycle_sets(3), path)
    lines = path.read_text().split("\n")
    fn(lines)
    path.write_text("\n".join(lines))
    return path


def test_axiom_violation_reports_record(tmp_path, db):
    # record 2 occupies lines 5..7; make one row a non-permutation
    path = _corrupt(tmp_path, db, lambda ls: ls.__setitem__(5, "1 1 1"))
    with pytest.raises(DatasetError) as info:
        load_dataset(path)
    assert info.value.record == 2


@pytest.mark.parametrize(
    "edit",
    [
        lambda ls: ls.__setitem__(1, "1 2"),
        lambda ls: ls.__setitem__(1, "1 2 x"),
        lambda ls: ls.__setitem__(1, "1 2 9"),
        lambda ls: ls.__setitem__(0, "#ybdb v2 kind=cycleset n=3 count=5"),
        lambda ls: ls.__setitem__(0, "#ybdb v1 kind=magma n=3"),
        lambda ls: ls.__setitem__(0, "garbage"),
        lambda ls: ls.__setitem__(0, "#ybdb v1 kind=cycleset n=3 count=6"),
        lambda ls: ls.insert(2, "1 2 3"),
    ],
)
def test_corruption_detected(tmp_path, db, edit):
    path = _corrupt(tmp_path, db, edit)
    with pytest.raises(DatasetError):
        load_dataset(path)


def test_partial_header_tolerates_short_file(tmp_path, db):
    path = tmp_path / "p.ybdb"
    write_dataset(DatasetHeader("cycleset", 3, partial=True), db.cycle_sets(3), path)
    text = path.read_text().replace("count=5", "count=9")
    path.write_text(text)
    header, recs = load_dataset(path)
    assert header.partial and len(recs) == 5


def test_header_validation():
    with pytest.raises(ValueError):
        DatasetHeader("cycleset", 3, producer="a b")
    with pytest.raises(ValueError):
        DatasetHeader("cycleset", 0)


def test_write_type_checks(db):
    with pytest.raises(TypeError):
        write_dataset(DatasetHeader("rack", 3), db.cycle_sets(3), io.StringIO())
    with pytest.raises(ValueError):
        write_dataset(DatasetHeader("cycleset", 4), db.cycle_sets(3), io.StringIO())


def test_stats_size_six(tmp_path, db):
    path = tmp_path / "six.ybdb"
    write_dataset(DatasetHeader("cycleset", 6), db.cycle_sets(6), path)
    st = dataset_stats(path)
    assert (st["solutions"], st["square_free"], st["indecomposable"], st["multipermutation"], st["irretractable"]) == (
        595, 68, 10, 554, 9,
    )
    assert st["non_square_free"] == 595 - 68
    text = format_stats(st, load_dataset(path)[0])
    assert "solutions 595" in text and "square-free 68" in text


def test_stats_noninvolutive_size_four(tmp_path):
    path = tmp_path / "ni4.ybdb"
    write_dataset(DatasetHeader("skewcycleset", 4), enumerate_noninvolutive(4).items, path)
    st = dataset_stats(path)
    assert st["solutions"] == st["non_involutive"] == 230
    assert st["biquandles_non_involutive"] == 75
    write_dataset(DatasetHeader("skewcycleset", 4), enumerate_noninvolutive(4, include_trivial=True).items, path)
    st = dataset_stats(path)
    assert (st["solutions"], st["involutive"], st["non_involutive"]) == (253, 23, 230)


def test_stats_racks(tmp_path, db):
    path = tmp_path / "r.ybdb"
    write_dataset(DatasetHeader("rack", 4), db.racks(4), path)
    st = dataset_stats(path)
    assert st["racks"] == 19
    assert st["quandles"] == sum(r.is_quandle() for r in db.racks(4))


def test_reading_is_lazy(tmp_path, db):
    path = tmp_path / "lazy.ybdb"
    write_dataset(DatasetHeader("cycleset", 3), db.cycle_sets(3), path)
    lines = path.read_text().split("\n")
    lines[-3] = "1 1 1"  # last record broken
    path.write_text("\n".join(lines))
    header, it = read_dataset(path)
    first = next(it)
    assert np.array_equal(first.z, db.cycle_sets(3)[0].z)
    with pytest.raises(DatasetError):
        list(it)
