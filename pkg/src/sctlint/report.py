"""End-to-end analysis of one source file."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from sctlint.callgraph import Call, SizeEntry, extract_calls
from sctlint.cc import CCReport, check_all
from sctlint.errors import RuleError, SctLintError
from sctlint.parser import (
    RawRule,
    SourceFile,
    build_signature,
    format_term,
    parse,
    rule_head,
)
from sctlint.rules import LintWarning, Rule, orthogonality_lint, validate_rule
from sctlint.sct import CallGraph, Mode, Verdict, closure, sct_check
from sctlint.terms import Signature, Symbol, subterms

ACCEPT, REJECT, ERROR = "Accept", "Reject", "Error"

ASSUMPTIONS = (
    "confluence of rewriting together with beta-reduction (not checked)",
    "preservation of typing by the rules (not checked)",
)


@dataclass
class RuleEntry:
    raw: RawRule
    rule: Rule | None = None
    error: RuleError | None = None

    def to_json(self) -> dict:
        return {
            "head": self.rule.head if self.rule is not None else rule_head(self.raw),
            "lhs": format_term(self.raw.lhs),
            "rhs": format_term(self.raw.rhs),
            "line": self.raw.line,
            "status": "ok" if self.error is None else f"{self.error.kind}: {self.error.message}",
        }


@dataclass
class Report:
    file: str
    mode: Mode = Mode.IDEMPOTENT
    use_cc: bool = True
    strict_partial: bool = False
    signature: Signature = field(default_factory=Signature)
    rules: list[RuleEntry] = field(default_factory=list)
    calls: list[Call] = field(default_factory=list)
    graph: CallGraph | None = None
    closed: CallGraph | None = None
    verdicts: dict[Mode, Verdict] = field(default_factory=dict)
    cc: CCReport | None = None
    warnings: list[LintWarning] = field(default_factory=list)
    error: SctLintError | None = None

    @property
    def valid_rules(self) -> list[Rule]:
        return [e.rule for e in self.rules if e.rule is not None]

    @property
    def sct(self) -> Verdict | None:
        return self.verdicts.get(self.mode)

    def partial_applications(self) -> list[LintWarning]:
        return [w for w in self.warnings if w.kind == "PartialApplication"]

    @property
    def overall(self) -> str:
        if self.error is not None or any(e.error for e in self.rules):
            return ERROR
        if not self.sct.holds:
            return REJECT
        if self.use_cc and not self.cc.ok:
            return REJECT
        if self.strict_partial and self.partial_applications():
            return REJECT
        return ACCEPT

    def strict_decrease_failures(self) -> list[Call]:
        """Recursive calls with no strictly decreasing argument at all.

        A termination check demanding a decrease at every recursive call
        rejects the system on any of these, even when SCT accepts it.
        """
        if self.closed is None:
            return []
        edges = self.closed.edges
        return [
            c for c in self.calls
            if (c.callee, c.caller) in edges
            and not any(SizeEntry.LESS in row for row in c.matrix.entries)
        ]

    def definable_constructors(self) -> list[str]:
        return [s.name for s in self.signature.values() if s.is_constructor and s.definable]

    def matched_definable_constructors(self) -> list[str]:
        """Constructors with rules of their own that some rule pattern-matches on.

        A check that forbids matching on defined symbols rejects the system
        because of these.
        """
        matched = {
            s.name
            for r in self.valid_rules
            for a in r.lhs_args
            for _, s in subterms(a)
            if isinstance(s, Symbol)
        }
        return [n for n in self.definable_constructors() if n in matched]

    def to_json(self) -> dict:
        closed = self.closed
        out = {
            "file": self.file,
            "symbols": [
                {
                    "name": s.name,
                    "level": str(s.level),
                    "arity": s.arity,
                    "constructor": s.is_constructor,
                    "definable": s.definable,
                }
                for s in self.signature.values()
            ],
            "rules": [e.to_json() for e in self.rules],
            "calls": [c.to_json() for c in self.calls],
            "closure": {
                "edge_count": closed.edge_count() if closed else 0,
                "modes": {str(m): str(v.status) for m, v in self.verdicts.items()},
            },
            "sct": self.sct.to_json() if self.sct else None,
            "cc": [c.to_json() for c in self.cc.checks] if self.cc else [],
            "cc_skipped": not self.use_cc,
            "single_criteria": {
                "strict_decrease_failures": [c.to_json() for c in self.strict_decrease_failures()],
                "definable_constructors": self.definable_constructors(),
                "matched_definable_constructors": self.matched_definable_constructors(),
            },
            "warnings": [w.to_json() for w in self.warnings],
            "error": None if self.error is None else {
                "kind": self.error.kind,
                "message": self.error.message,
                "line": self.error.line,
                "column": self.error.column,
            },
            "overall": self.overall,
        }
        if out["overall"] == ACCEPT:
            out["assumptions"] = list(ASSUMPTIONS)
        return out

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"


def analyze(
    text: str | bytes,
    file: str = "<input>",
    mode: Mode = Mode.IDEMPOTENT,
    use_cc: bool = True,
    strict_partial: bool = False,
    lint: bool = False,
) -> Report:
    report = Report(file, mode, use_cc, strict_partial)
    try:
        source: SourceFile = parse(text)
        report.signature = sig = build_signature(source)
    except SctLintError as e:
        report.error = e
        return report

    for index, raw in enumerate(source.rules):
        try:
            report.rules.append(RuleEntry(raw, validate_rule(raw, sig, index)))
        except RuleError as e:
            report.rules.append(RuleEntry(raw, error=e))
    rules = report.valid_rules

    for r in rules:
        report.calls.extend(extract_calls(r, sig, report.warnings))
    definable = [s.name for s in sig.values() if s.definable]
    report.graph = CallGraph.from_calls(
        report.calls, {n: s.arity for n, s in sig.items()}, definable
    )
    report.closed = closure(report.graph)
    for m in Mode:
        report.verdicts[m] = sct_check(report.closed, m)
    if use_cc:
        report.cc = check_all(rules, sig)
    if lint:
        report.warnings.extend(orthogonality_lint(rules, sig))
    return report
