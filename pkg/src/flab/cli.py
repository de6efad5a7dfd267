"""Command-line interface.

Subcommands:
  analyze  -- hypercenter / intersection profile of one group for one class
  verify   -- run identity checks over a corpus; exit 1 on any asserted failure
  lattice  -- subgroup-lattice statistics for one group
"""

from __future__ import annotations

import argparse
import os
import sys

from .checks import CHECKS, default_suite, parse_partition, run_check
from .corpus import build_corpus, load_corpus_file
from .errors import FlabError, SpecParseError
from .formations import format_formation, parse_formation
from .groups import make_group
from .hypercenter import hypercenter
from .intersections import (
    CYCLIC_PRIMARY,
    MAXIMAL,
    SYLOW,
    abnormal_maximal_intersection,
    f_maximal_intersection,
    f_maximal_normalizer_intersection,
    subnormalizer_intersection,
)
from .lattice import lattice_summary
from .report import render_report

_SIGMA = {"sylow": SYLOW, "cyclic": CYCLIC_PRIMARY, "maximal": MAXIMAL}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="profile one group under one class")
    p_analyze.add_argument("--group", required=True, help="group spec, e.g. 'S4' or 'sd(C5,C4,n0->n0^2)'")
    p_analyze.add_argument("--formation", default="N", help="class expression (default N)")
    p_analyze.add_argument("--sigma", choices=sorted(_SIGMA), default="sylow")

    p_verify = sub.add_parser("verify", help="run identity checks over a corpus")
    p_verify.add_argument("--check", default="all", help="check name or 'all'")
    p_verify.add_argument("--formation", help="class expression for parameterised checks")
    p_verify.add_argument("--partition", help="partition preset or blocks, e.g. '{2,3},{5}'")
    p_verify.add_argument("--sigma", choices=sorted(_SIGMA))
    p_verify.add_argument("--corpus", default="builtin", help="'builtin' or a corpus file path")
    p_verify.add_argument("--max-order", type=int, default=None)
    p_verify.add_argument("--format", choices=("table", "json"), default="table")

    p_lattice = sub.add_parser("lattice", help="subgroup-lattice statistics")
    p_lattice.add_argument("--group", required=True)
    return parser


def _cmd_analyze(args) -> int:
    G = make_group(args.group)
    F = parse_formation(args.formation)
    sigma = _SIGMA[args.sigma]
    rows = [
        ("hypercenter", hypercenter(F, G)),
        ("member-intersection", f_maximal_intersection(F, G)),
        ("normalizer-intersection", f_maximal_normalizer_intersection(F, G)),
        ("abnormal-maximal-intersection", abnormal_maximal_intersection(F, G)),
        (f"subnormalizer-intersection[{args.sigma}]", subnormalizer_intersection(F, sigma, G)),
    ]
    print(f"group {args.group}: order {G.order}, degree {G.degree}")
    print(f"class {format_formation(F)}")
    for label, ref in rows:
        fp = ",".join(map(str, ref.fingerprint[:12]))
        if ref.order > 12:
            fp += f",..({ref.order})"
        print(f"  {label:32s} order {ref.order:5d}  elements [{fp}]")
    return 0


def _default_max_order(args) -> int | None:
    if args.max_order is not None:
        return args.max_order
    env = os.environ.get("FLAB_MAX_ORDER")
    if env:
        return int(env)
    return None


def _cmd_verify(args) -> int:
    max_order = _default_max_order(args)
    if args.corpus == "builtin":
        corpus = build_corpus(max_order)
    else:
        corpus = load_corpus_file(args.corpus, max_order)
    if args.check == "all":
        reports = default_suite(corpus)
    else:
        if args.check not in CHECKS:
            raise SpecParseError(f"unknown check {args.check!r}; choose from {sorted(CHECKS)} or 'all'")
        params: dict = {}
        if args.formation:
            params["formation"] = parse_formation(args.formation)
        if args.partition:
            params["partition"] = parse_partition(args.partition)
        if args.sigma:
            params["sigma"] = _SIGMA[args.sigma]
        reports = [run_check(args.check, params, corpus)]
    failed = False
    for report in reports:
        print(render_report(report, args.format))
        if args.format == "table":
            print()
        if not report.ok:
            failed = True
    return 1 if failed else 0


def _cmd_lattice(args) -> int:
    G = make_group(args.group)
    summary = lattice_summary(G)
    print(f"group {args.group}: order {summary['order']}")
    print(f"subgroups: {summary['subgroups']} in {summary['conjugacy_classes']} conjugacy classes")
    print("count by order:")
    for order, count in summary["by_order"].items():
        print(f"  {order:6d}: {count}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "lattice":
            return _cmd_lattice(args)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
