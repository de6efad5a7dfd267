"""Acceptance suite: one test per criterion, printed as pass/fail lines.

Criteria 1 and 2 carry their own wall-clock targets on the order-200 corpus;
criterion 12 times the whole default verification suite.  All equality
assertions are exact (element-set equality).
"""

import time

import pytest

from flab.checks import PARTITION_PRESETS, run_check
from flab.cli import main as cli_main
from flab.corpus import build_corpus
from flab.formations import NIL, SUPERSOLUBLE, Gpi, parse_formation
from flab.hypercenter import hypercenter, is_f_central_local, is_f_central_oracle
from flab.report import render_report
from flab.series import chief_factors, upper_central_series


CROSS_23 = parse_formation("cross[{2,3}:gpi]")
CROSS_235 = parse_formation("cross[{2,3}:gpi;{5}:gpi]")
CROSS_2537 = parse_formation("cross[{2,5}:gpi;{3,7}:gpi]")


@pytest.fixture(scope="module")
def corpus200():
    return build_corpus(200)


@pytest.fixture(scope="module")
def full_corpus():
    return build_corpus()


def _announce(criterion: str, ok: bool) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {criterion}")
    assert ok, criterion


def test_criterion_01_sylow_normalizer_intersection_is_hypercenter(corpus200):
    assert len(corpus200) >= 40
    assert all(e.group.order <= 200 for e in corpus200)
    start = time.perf_counter()
    report = run_check("baer-a1", {}, corpus200)
    elapsed = time.perf_counter() - start
    ok = report.failed == 0 and elapsed < 60
    _announce(
        f"criterion 1: Sylow-normalizer intersection = nilpotent hypercenter "
        f"on {len(corpus200)} groups in {elapsed:.1f}s",
        ok,
    )


def test_criterion_02_maximal_nilpotent_intersection_is_hypercenter(corpus200):
    start = time.perf_counter()
    report = run_check("cor-a4", {}, corpus200)
    elapsed = time.perf_counter() - start
    ok = report.failed == 0 and elapsed < 60
    _announce(
        f"criterion 2: maximal-nilpotent intersection = hypercenter in {elapsed:.1f}s",
        ok,
    )


def test_criterion_03_opi_of_normalizer_intersection(corpus200):
    from flab.intersections import (
        f_maximal_intersection,
        f_maximal_normalizer_intersection,
    )

    ok = True
    for F in (NIL, SUPERSOLUBLE, Gpi(frozenset({2, 3})), CROSS_235):
        report = run_check("prop1", {"formation": F}, corpus200)
        ok = ok and report.failed == 0
    # the correction is exercised nontrivially: for the {2,3}-group class some
    # corpus group has NI strictly above Int (the O^pi' step really shrinks)
    gpi = Gpi(frozenset({2, 3}))
    strict = False
    for entry in corpus200:
        if entry.group.order % 5:
            continue
        ni = f_maximal_normalizer_intersection(gpi, entry.group)
        int_f = f_maximal_intersection(gpi, entry.group)
        if ni.mask != int_f.mask:
            strict = True
            break
    _announce("criterion 3: O^pi' of NI equals Int for all four classes", ok and strict)


def test_criterion_04_block_normalizer_intersections(corpus200):
    ok = True
    for preset in ("singletons", "{2,3},{5}"):
        report = run_check(
            "theorem-a", {"partition": PARTITION_PRESETS[preset]}, corpus200
        )
        ok = ok and report.failed == 0
        if preset == "{2,3},{5}":
            frob = next(r for r in report.rows if r["group"] == "C5:C4")
            ok = ok and frob["lhs_order"] == 1 and frob["rhs_order"] == 1
            s3c5 = next(r for r in report.rows if r["group"] == "S3xC5")
            ok = ok and s3c5["lhs_order"] == 30 and s3c5["rhs_order"] == 30
    _announce("criterion 4: block NI intersections equal the cross hypercenter", ok)


def test_criterion_05_subnormalizer_intersections_positive(corpus200):
    ok = True
    for F in (NIL, CROSS_235):
        report = run_check("theorem-b", {"formation": F}, corpus200)
        ok = ok and report.assertive and report.failed == 0
    _announce(
        "criterion 5: Sylow and cyclic-primary subnormalizer intersections "
        "equal the hypercenter for cross classes",
        ok,
    )


def test_criterion_06_supersoluble_probe_finds_witness(full_corpus):
    report = run_check("theorem-b", {"formation": SUPERSOLUBLE}, full_corpus)
    failing = [row for row in report.rows if not row["pass"]]
    rendered = render_report(report, "table")
    ok = (
        len(failing) >= 1
        and not report.assertive
        and all(row["witness"] is not None for row in failing)
        and "|lhs|=" in rendered  # the witness is printed
    )
    _announce(
        f"criterion 6: supersoluble subnormalizer probe found "
        f"{len(failing)} witness group(s): {[r['group'] for r in failing]}",
        ok,
    )


def test_criterion_07_boundary_search_finds_a4_at_3(full_corpus):
    report = run_check("boundary", {"formation": SUPERSOLUBLE}, full_corpus)
    a4_rows = [r for r in report.rows if r["group"] == "A4"]
    ok = len(a4_rows) == 1 and 3 in a4_rows[0]["witness"]["primes"]
    _announce("criterion 7: boundary search reports (A4, 3)", ok)


def test_criterion_08_centrality_paths_agree(corpus200):
    formations = (NIL, CROSS_23, CROSS_235, CROSS_2537, SUPERSOLUBLE)
    disagreements = 0
    factors = 0
    for entry in corpus200:
        G = entry.group
        for factor in chief_factors(G):
            for F in formations:
                oracle = is_f_central_oracle(F, G, factor)
                local = is_f_central_local(F, G, factor)
                factors += 1
                if oracle.central != local.central:
                    disagreements += 1
    _announce(
        f"criterion 8: oracle and local centrality agree on {factors} verdicts",
        disagreements == 0,
    )


def test_criterion_09_greedy_hypercenter_is_ucs_limit(corpus200):
    bad = []
    for entry in corpus200:
        z = hypercenter(NIL, entry.group)
        ucs = upper_central_series(entry.group)[-1]
        if z.mask != ucs.mask:
            bad.append(entry.name)
    _announce("criterion 9: greedy nilpotent hypercenter equals the UCS limit", not bad)


def test_criterion_10_lemma_suite(corpus200):
    report = run_check("lemmas", {}, corpus200)
    _announce(
        f"criterion 10: lemma suite on {len(report.rows)} groups "
        f"({sum(1 for _ in report.rows)} rows)",
        report.failed == 0,
    )


def test_criterion_11_bounded_fitting_length_intersections(corpus200):
    report = run_check("sidorov", {}, corpus200)
    _announce(
        f"criterion 11: bounded-Fitting-length member intersections equal the "
        f"hypercenter on {len(report.rows)} (group, r) rows",
        report.failed == 0,
    )


def test_criterion_12_full_suite_under_ten_minutes(capsys):
    start = time.perf_counter()
    code = cli_main(["verify", "--format", "json"])
    elapsed = time.perf_counter() - start
    with capsys.disabled():
        _announce(
            f"criterion 12: full verification suite finished in {elapsed:.0f}s "
            f"(exit code {code})",
            code == 0 and elapsed < 600,
        )
