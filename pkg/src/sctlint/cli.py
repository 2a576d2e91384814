"""Command-line driver: ``sct-lint FILE [options]``.

Exit status is 0 when the system is accepted, 1 when it is rejected (not
provable by the criterion, which is not a claim of non-termination) and 2 on
usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from sctlint.report import ACCEPT, ASSUMPTIONS, ERROR, REJECT, Report, analyze
from sctlint.sct import Mode, loop_is_checked, shortest_witness, to_dot

EXIT = {ACCEPT: 0, REJECT: 1, ERROR: 2}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sct-lint",
        description="Size-change termination and computability-closure check for rewrite rules.",
    )
    p.add_argument("file", type=Path)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.IDEMPOTENT.value,
                   help="which self-loops must show a decrease (default: idempotent)")
    p.add_argument("--json", type=Path, metavar="PATH", help="write the full report as JSON")
    p.add_argument("--dot", type=Path, metavar="PATH", help="write the call graph in DOT format")
    p.add_argument("--dot-closure", type=Path, metavar="PATH", help="write the closed call graph in DOT format")
    p.add_argument("--no-cc", action="store_true", help="skip the computability-closure check")
    p.add_argument("--strict-partial", action="store_true", help="reject partial applications")
    p.add_argument("--lint", action="store_true", help="report left-linearity and overlap warnings")
    p.add_argument("--explain", metavar="SYMBOL", help="show the loops and witnesses of SYMBOL")
    return p


def _call_ref(c) -> str:
    where = ".".join(map(str, c.position)) or "root"
    return f"{c.caller} -> {c.callee} {c.matrix} (rule {c.rule} at {where})"


def summary(report: Report) -> str:
    lines = []
    if report.error is not None:
        lines.append(f"{report.file}: {report.error.kind}: {report.error}")
        lines.append(f"verdict: {ERROR}")
        return "\n".join(lines)
    closed = report.closed
    lines.append(
        f"{report.file}: {len(report.signature)} symbols, {len(report.rules)} rules, "
        f"{len(report.calls)} calls, {closed.edge_count()} closure edges"
    )
    for e in report.rules:
        if e.error is not None:
            lines.append(f"  rule at line {e.raw.line}: {e.error.kind}: {e.error.message}")
    sct = report.sct
    lines.append(f"SCT ({sct.mode}): {'holds' if sct.holds else 'fails'}")
    for f in sct.failures:
        lines.append(f"  loop on {f.symbol} with matrix {f.matrix} has no decrease on its diagonal")
        for c in f.witness:
            lines.append(f"    {_call_ref(c)}")
    if report.cc is None:
        lines.append("CC: skipped")
    else:
        checks = report.cc.checks
        lines.append(f"CC: {sum(c.ok for c in checks)}/{len(checks)} rules pass")
        for c in report.cc.failures():
            f = c.result.failure
            lines.append(f"  rule {c.rule.index} ({c.rule}): {f.reason} at {f.term}")
    for c in report.strict_decrease_failures():
        lines.append(f"note: recursive call without strict decrease: {_call_ref(c)}")
    defined = report.matched_definable_constructors()
    if defined:
        lines.append(f"note: patterns match on constructors that have rules: {', '.join(defined)}")
    for w in report.warnings:
        lines.append(f"warning: {w.kind}: {w.message}")
    verdict = report.overall
    lines.append(f"verdict: {verdict}")
    if verdict == ACCEPT:
        lines.extend(f"  assuming {a}" for a in ASSUMPTIONS)
    return "\n".join(lines)


def explain(report: Report, symbol: str) -> str:
    if report.closed is None or symbol not in report.closed.arity:
        return f"{symbol}: not in the call graph"
    loops = report.closed.loops(symbol)
    if not loops:
        return f"{symbol}: no loops"
    lines = [f"{symbol}: {len(loops)} loop matrices in the closure"]
    for m in loops:
        tags = []
        if m.is_idempotent():
            tags.append("idempotent")
        tags.append("decreasing" if m.has_decrease_on_diagonal() else "NOT decreasing")
        if not loop_is_checked(m, report.mode):
            tags.append(f"not checked in {report.mode} mode")
        lines.append(f"  {m}  ({', '.join(tags)})")
        for c in shortest_witness(report.closed, symbol, m):
            lines.append(f"    {_call_ref(c)}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.file.read_bytes()
    except OSError as e:
        print(f"sct-lint: cannot read {args.file}: {e.strerror}", file=sys.stderr)
        return 2
    report = analyze(
        text,
        file=args.file.name,
        mode=Mode(args.mode),
        use_cc=not args.no_cc,
        strict_partial=args.strict_partial,
        lint=args.lint,
    )
    print(summary(report))
    if args.explain:
        print(explain(report, args.explain))
    if args.json:
        args.json.write_text(report.to_json_text(), encoding="utf-8")
    if report.graph is not None:
        if args.dot:
            args.dot.write_text(to_dot(report.graph) + "\n", encoding="utf-8")
        if args.dot_closure:
            args.dot_closure.write_text(to_dot(report.closed) + "\n", encoding="utf-8")
    return EXIT[report.overall]
