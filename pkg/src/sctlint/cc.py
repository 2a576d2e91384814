"""Computability closure of a left-hand side, with calls admitted through the
formal call relation.

A right-hand side is accepted when it can be built from the rule's pattern
variables by the clauses below, tried in this order at every node:

    var   pattern variable or variable bound by an enclosing binder
    cons  c u1..un, c a constructor of arity n without rules, every ui accepted
    call  g u1..un, g any other declared symbol of arity n >= 1, every ui accepted
    sym   declared symbol of arity 0 that is not a constructor
    acc   strict constructor subterm of a left-hand side argument
    app   a b, not a saturated symbol spine, a and b accepted
    lam   x : U => b, U accepted and b accepted with x bound
    prod  (x : U) -> V, U accepted and V accepted with x bound
    sort  Type

Calls impose no size constraint here; size is the SCT engine's business.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

from sctlint.callgraph import strict_subterm
from sctlint.parser import format_term
from sctlint.rules import Rule
from sctlint.terms import (
    App,
    Lambda,
    Position,
    Product,
    Signature,
    SortType,
    Symbol,
    Term,
    Var,
    arg_position,
    rename_apart,
    spine,
)

CALL_CLAUSES = frozenset({"cons", "call", "sym"})


@dataclass(frozen=True)
class ClosureContext:
    rule: Rule
    base: frozenset[str]
    locally_bound: frozenset[str] = frozenset()

    @classmethod
    def for_rule(cls, rule: Rule) -> ClosureContext:
        return cls(rule, rule.vars)

    def bind(self, name: str) -> ClosureContext:
        return ClosureContext(self.rule, self.base, self.locally_bound | {name})


@dataclass(frozen=True)
class Failure:
    position: Position
    term: str
    reason: str

    def to_json(self) -> dict:
        return {"position": list(self.position), "term": self.term, "reason": self.reason}


@dataclass(frozen=True)
class CCResult:
    ok: bool
    trace: tuple[tuple[Position, str], ...]
    failure: Failure | None = None

    def __bool__(self) -> bool:
        return self.ok

    def call_positions(self) -> set[Position]:
        return {pos for pos, clause in self.trace if clause in CALL_CLAUSES}


class _Fail(Exception):
    def __init__(self, failure: Failure):
        self.failure = failure


def cc_member(t: Term, ctx: ClosureContext, sig: Signature, pos: Position = ()) -> CCResult:
    trace: list[tuple[Position, str]] = []
    try:
        _member(t, ctx, sig, pos, trace)
    except _Fail as e:
        return CCResult(False, tuple(trace), e.failure)
    return CCResult(True, tuple(trace))


def _member(t: Term, ctx: ClosureContext, sig: Signature, pos: Position, trace: list) -> None:
    def fail(reason: str):
        raise _Fail(Failure(pos, format_term(t), reason))

    if isinstance(t, Var):
        if t.name in ctx.base or t.name in ctx.locally_bound:
            trace.append((pos, "var"))
            return
        fail(f"variable {t.name!r} is not bound by the left-hand side")

    head, args = spine(t)
    if isinstance(head, Symbol):
        info = sig.get(head.name)
        if info is None:
            fail(f"undeclared symbol {head.name!r}")
        if len(args) == info.arity:
            if info.is_constructor and not info.definable:
                clause = "cons"
            elif info.arity:
                clause = "call"
            else:
                clause = "sym"
            trace.append((pos, clause))
            for i, a in enumerate(args):
                _member(a, ctx, sig, arg_position(pos, len(args), i), trace)
            return
        if not args:
            fail(f"{head.name!r} expects {info.arity} arguments")

    if any(strict_subterm(t, p, sig) for p in ctx.rule.lhs_args):
        trace.append((pos, "acc"))
        return

    if isinstance(t, App):
        if isinstance(head, Symbol) and len(args) < sig[head.name].arity:
            # a partial application never reaches a saturated prefix
            fail(f"{head.name!r} expects {sig[head.name].arity} arguments")
        trace.append((pos, "app"))
        _member(t.head, ctx, sig, pos + (1,), trace)
        _member(t.arg, ctx, sig, pos + (2,), trace)
        return
    if isinstance(t, Lambda):
        trace.append((pos, "lam"))
        _member(t.annotation, ctx, sig, pos + (1,), trace)
        _member(t.body, ctx.bind(t.bound), sig, pos + (2,), trace)
        return
    if isinstance(t, Product):
        trace.append((pos, "prod"))
        _member(t.domain, ctx, sig, pos + (1,), trace)
        _member(t.codomain, ctx.bind(t.bound), sig, pos + (2,), trace)
        return
    if isinstance(t, SortType):
        trace.append((pos, "sort"))
        return
    fail("no clause applies")


@dataclass(frozen=True)
class RuleCheck:
    rule: Rule
    result: CCResult

    @property
    def ok(self) -> bool:
        return self.result.ok

    def to_json(self) -> dict:
        detail = (
            [{"position": list(p), "clause": c} for p, c in self.result.trace]
            if self.ok else self.result.failure.to_json()
        )
        return {
            "rule": self.rule.index,
            "status": "pass" if self.ok else "fail",
            "trace_or_failure": detail,
        }


@dataclass(frozen=True)
class CCReport:
    checks: tuple[RuleCheck, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[RuleCheck]:
        return [c for c in self.checks if not c.ok]


def check_rule(rule: Rule, sig: Signature) -> CCResult:
    rhs = rename_apart(rule.rhs, rule.vars)
    return cc_member(rhs, ClosureContext.for_rule(rule), sig)


def check_all(rules: Sequence[Rule], sig: Signature) -> CCReport:
    return CCReport(tuple(RuleCheck(r, check_rule(r, sig)) for r in rules))
