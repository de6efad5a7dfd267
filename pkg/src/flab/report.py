"""Rendering of check reports as fixed-width tables or JSON."""

from __future__ import annotations

import json

from .checks import CheckReport


def render_report(report: CheckReport, fmt: str = "table") -> str:
    if fmt == "json":
        return _render_json(report)
    if fmt == "table":
        return _render_table(report)
    raise ValueError(f"unknown format {fmt!r}")


def _render_json(report: CheckReport) -> str:
    payload = {
        "check": report.check,
        "params": report.params,
        "rows": report.rows,
        "summary": {"pass": report.passed, "fail": report.failed},
        "assertive": report.assertive,
        "elapsed_ms": report.elapsed_ms,
    }
    return json.dumps(payload, sort_keys=True, default=_json_default)


def _json_default(value):
    if isinstance(value, frozenset):
        return sorted(value)
    raise TypeError(f"not JSON serialisable: {value!r}")


def _format_params(params: dict) -> str:
    if not params:
        return ""
    parts = []
    for key in sorted(params):
        value = params[key]
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        parts.append(f"{key}={value}")
    return " ".join(parts)


def _render_table(report: CheckReport) -> str:
    header = f"check {report.check}"
    params = _format_params(report.params)
    if params:
        header += f" [{params}]"
    if not report.assertive:
        header += " (informational)"
    lines = [header]
    widths = (24, 6, 9, 9, 5)
    titles = ("group", "order", "lhs", "rhs", "ok")
    lines.append(" ".join(t.ljust(w) for t, w in zip(titles, widths)))
    for row in report.rows:
        lhs = "-" if row["lhs_order"] is None else str(row["lhs_order"])
        rhs = "-" if row["rhs_order"] is None else str(row["rhs_order"])
        cells = [
            str(row["group"])[:24].ljust(24),
            str(row["order"]).ljust(6),
            lhs.ljust(9),
            rhs.ljust(9),
            ("yes" if row["pass"] else "NO").ljust(5),
        ]
        line = " ".join(cells)
        extras = []
        if row.get("note"):
            extras.append(row["note"])
        if row.get("witness"):
            extras.append(_short_witness(row["witness"]))
        if extras:
            line += "  " + "; ".join(extras)
        lines.append(line.rstrip())
    lines.append(f"summary: pass={report.passed} fail={report.failed}")
    return "\n".join(lines)


def _short_witness(witness: dict) -> str:
    if "primes" in witness:
        return "p=" + ",".join(map(str, witness["primes"]))
    if "failures" in witness:
        shown = witness["failures"][:2]
        more = len(witness["failures"]) - len(shown)
        text = " | ".join(shown)
        return text + (f" (+{more} more)" if more > 0 else "")
    parts = []
    if "lhs_order" in witness:
        parts.append(f"|lhs|={witness['lhs_order']} |rhs|={witness['rhs_order']}")
    if "cyclic_primary_order" in witness:
        parts.append(f"|cp|={witness['cyclic_primary_order']}")
    if "lhs_fingerprint" in witness:
        parts.append(f"lhs~{_abbrev(witness['lhs_fingerprint'])} rhs~{_abbrev(witness['rhs_fingerprint'])}")
    return " ".join(parts)


def _abbrev(fingerprint: list[int]) -> str:
    if len(fingerprint) <= 6:
        return "[" + ",".join(map(str, fingerprint)) + "]"
    head = ",".join(map(str, fingerprint[:5]))
    return f"[{head},..({len(fingerprint)})]"
