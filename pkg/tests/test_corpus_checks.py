import json

import pytest

from flab.checks import PARTITION_PRESETS, parse_partition, run_check
from flab.corpus import build_corpus, load_corpus_file
from flab.errors import SpecParseError
from flab.formations import NIL, SUPERSOLUBLE
from flab.intersections import SYLOW
from flab.report import render_report


@pytest.fixture(scope="module")
def small_corpus():
    return build_corpus(40)


def test_build_corpus_bounds_and_content():
    c = build_corpus(24)
    names = set(c.names())
    for expected in ("S4", "SL(2,3)", "A4", "D8", "Q8", "C2xC6", "C7:C3", "C5:C4", "V4:S3"):
        assert expected in names, expected
    assert all(e.group.order <= 24 for e in c)
    assert all(e.provenance == "builtin" for e in c)


def test_build_corpus_trivial():
    c = build_corpus(1)
    assert c.names() == ["C1"]
    assert c.entries[0].group.order == 1


def test_build_corpus_extras():
    c = build_corpus(24, extra=["sd(C3,C2,n0->n0^-1)"])
    entry = c.get("sd(C3,C2,n0->n0^-1)")
    assert entry.provenance == "extra" and entry.group.order == 6


def test_corpus_frobenius_entry_is_centerless():
    c = build_corpus(20)
    frob = c.get("C5:C4").group
    assert frob.order == 20
    elems = frob.elements()
    center = [p for p in elems if all(p * q == q * p for q in elems)]
    assert len(center) == 1


def test_corpus_names_unique_and_sorted():
    c = build_corpus(60)
    names = c.names()
    assert len(names) == len(set(names))
    orders = [e.group.order for e in c]
    assert orders == sorted(orders)


def test_default_corpus_includes_module_products():
    c = build_corpus()
    assert c.get("E27:A4").group.order == 324
    assert c.get("E49:S3").group.order == 294
    assert c.get("S3xC5").group.order == 30


def test_corpus_file_loading(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("# comment line\nS4\nC6  # trailing comment\n\nsd(C5,C4,n0->n0^2)\n")
    c = load_corpus_file(path)
    assert [e.name for e in c] == ["C6", "sd(C5,C4,n0->n0^2)", "S4"]
    assert all(e.provenance == "file" for e in c)


def test_partition_parsing():
    assert parse_partition("singletons") == []
    assert parse_partition("{2,3},{5}") == [(frozenset({2, 3}), False), (frozenset({5}), False)]
    assert parse_partition("{2,3}:spi") == [(frozenset({2, 3}), True)]
    with pytest.raises(SpecParseError):
        parse_partition("{2,3},{3,5}")
    with pytest.raises(SpecParseError):
        parse_partition("2,3")


def test_run_check_rejects_unknown():
    with pytest.raises(SpecParseError):
        run_check("no-such-check", {}, build_corpus(6))


def test_baer_rows_have_expected_shape(small_corpus):
    r = run_check("baer-a1", {}, small_corpus)
    assert r.assertive and r.failed == 0
    s3_row = next(row for row in r.rows if row["group"] == "S3")
    assert s3_row["lhs_order"] == 1 and s3_row["rhs_order"] == 1
    assert s3_row["witness"] is None
    orders = [(row["order"], row["group"]) for row in r.rows]
    assert orders == sorted(orders)


def test_theorem_a_expected_rows():
    c = build_corpus(40)
    r = run_check("theorem-a", {"partition": PARTITION_PRESETS["{2,3},{5}"]}, c)
    assert r.failed == 0
    frob = next(row for row in r.rows if row["group"] == "C5:C4")
    assert frob["lhs_order"] == 1 and frob["rhs_order"] == 1
    s3c5 = next(row for row in r.rows if row["group"] == "S3xC5")
    assert s3c5["lhs_order"] == 30 and s3c5["rhs_order"] == 30


def test_theorem_a_soluble_blocks_probe(small_corpus):
    r = run_check("theorem-a", {"partition": parse_partition("{2,3}:spi")}, small_corpus)
    assert not r.assertive
    assert all(row.get("note") for row in r.rows)


def test_theorem_b_u_probe_is_informational(small_corpus):
    r = run_check("theorem-b", {"formation": SUPERSOLUBLE}, small_corpus)
    assert not r.assertive
    assert r.ok  # informational checks never fail the run


def test_prop2_check(small_corpus):
    r = run_check("prop2", {"formation": NIL, "sigma": SYLOW}, small_corpus)
    assert r.assertive and r.failed == 0


def test_lemmas_check_small():
    c = build_corpus(24)
    r = run_check("lemmas", {}, c)
    assert r.failed == 0
    a4_row = next(row for row in r.rows if row["group"] == "A4")
    assert "instances" in a4_row["note"]


def test_boundary_check_reports_a4(small_corpus):
    r = run_check("boundary", {"formation": SUPERSOLUBLE}, small_corpus)
    assert not r.assertive
    a4 = next(row for row in r.rows if row["group"] == "A4")
    assert a4["witness"]["primes"] == [3]


def test_report_json_schema(small_corpus):
    r = run_check("baer-a1", {}, small_corpus)
    payload = json.loads(render_report(r, "json"))
    assert payload["check"] == "baer-a1"
    assert set(payload["summary"]) == {"pass", "fail"}
    assert payload["summary"]["fail"] == 0
    assert isinstance(payload["elapsed_ms"], int)
    row = payload["rows"][0]
    for key in ("group", "order", "lhs_order", "rhs_order", "pass", "witness"):
        assert key in row


def test_report_table_format(small_corpus):
    r = run_check("cor-a4", {}, small_corpus)
    text = render_report(r, "table")
    lines = text.splitlines()
    assert lines[0].startswith("check cor-a4")
    assert lines[-1] == f"summary: pass={r.passed} fail={r.failed}"
    assert len(lines) == len(r.rows) + 3


def test_reports_are_deterministic(small_corpus):
    r1 = run_check("baer-a1", {}, small_corpus)
    r2 = run_check("baer-a1", {}, small_corpus)
    assert render_report(r1, "table") == render_report(r2, "table")
    j1 = json.loads(render_report(r1, "json"))
    j2 = json.loads(render_report(r2, "json"))
    j1f0 = {k: v for k, v in j1.items() if k != "elapsed_ms"}
    j2f0 = {k: v for k, v in j2.items() if k != "elapsed_ms"}
    assert j1f0 == j2f0


def test_failing_row_carries_witness():
    # force a failing probe row: the supersoluble subnormalizer probe on a
    # corpus containing the module-style product must expose a witness
    c = build_corpus(40, extra=["sd(E(3^3),A4,n0->n1,n1->n0^2*n1^2,n2->n0*n1*n2|n0->n0*n1,n1->n2,n2->n1^2*n2^2)"])
    r = run_check("theorem-b", {"formation": SUPERSOLUBLE}, c)
    failing = [row for row in r.rows if not row["pass"]]
    assert failing
    w = failing[0]["witness"]
    assert w["lhs_order"] != w["rhs_order"]
    assert w["lhs_fingerprint"] != w["rhs_fingerprint"]
    assert r.ok  # probe: exit status unaffected
