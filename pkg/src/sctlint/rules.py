"""Rewrite rules: validation of raw rules and the orthogonality lint."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

from sctlint.errors import (
    HeadNotFunction,
    NonPatternArgument,
    RhsNotBetaNormal,
    UnboundRhsVariable,
    UnsaturatedHead,
    UnusedRuleVariable,
)
from sctlint.parser import RawRule, format_term
from sctlint.terms import (
    App,
    Lambda,
    Level,
    Position,
    Signature,
    Symbol,
    Term,
    Var,
    apply,
    arg_position,
    free_vars,
    is_pattern,
    spine,
    subterms,
)


@dataclass(frozen=True)
class Rule:
    head: str
    lhs_args: tuple[Term, ...]
    rhs: Term
    vars: frozenset[str]
    index: int = 0
    line: int = 0

    @property
    def lhs(self) -> Term:
        return apply(Symbol(self.head), *self.lhs_args)

    def __str__(self) -> str:
        return f"{format_term(self.lhs)} --> {format_term(self.rhs)}"


@dataclass(frozen=True)
class LintWarning:
    kind: str
    message: str
    rules: tuple[int, ...] = ()
    position: Position | None = None
    # Overlap only: (outer rule, inner rule, position in the outer left-hand side)
    sites: tuple[tuple[int, int, Position], ...] = field(default=())

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "message": self.message, "rules": list(self.rules)}
        if self.position is not None:
            out["position"] = list(self.position)
        if self.sites:
            out["sites"] = [
                {"outer": o, "inner": i, "position": list(p)} for o, i, p in self.sites
            ]
        return out


def beta_normal(t: Term) -> bool:
    return not any(
        isinstance(s, App) and isinstance(s.head, Lambda) for _, s in subterms(t)
    )


def validate_rule(raw: RawRule, sig: Signature, index: int = 0) -> Rule:
    head, args = spine(raw.lhs)
    if not isinstance(head, Symbol):
        raise HeadNotFunction("rule head must be a function symbol", raw.line)
    info = sig.lookup(head.name)
    if info.level is Level.TYPE_CONST:
        raise HeadNotFunction(f"{head.name!r} is a type constant and cannot have rules", raw.line)
    if len(args) != info.arity:
        raise UnsaturatedHead(
            f"{head.name!r} has arity {info.arity} but is applied to {len(args)} arguments",
            raw.line,
        )
    for i, a in enumerate(args):
        if not is_pattern(a, sig):
            raise NonPatternArgument(
                f"argument {i + 1} of {head.name!r} is not a pattern: {format_term(a)}",
                i + 1, raw.line,
            )
    if not beta_normal(raw.rhs):
        raise RhsNotBetaNormal("right-hand side contains a beta-redex", raw.line)
    lhs_vars = set().union(*(free_vars(a) for a in args))
    unbound = free_vars(raw.rhs) - lhs_vars
    if unbound:
        raise UnboundRhsVariable(
            f"right-hand side variable {sorted(unbound)[0]!r} does not occur on the left", raw.line
        )
    unused = [v for v in raw.bound_vars if v not in lhs_vars]
    if unused:
        raise UnusedRuleVariable(f"rule variable {unused[0]!r} does not occur on the left", raw.line)
    return Rule(head.name, tuple(args), raw.rhs, frozenset(lhs_vars), index, raw.line)


# --- first-order unification over patterns ---------------------------------

Subst = dict[str, Term]


def _walk(t: Term, s: Subst) -> Term:
    while isinstance(t, Var) and t.name in s:
        t = s[t.name]
    return t


def _occurs(name: str, t: Term, s: Subst) -> bool:
    t = _walk(t, s)
    if isinstance(t, Var):
        return t.name == name
    if isinstance(t, App):
        return _occurs(name, t.head, s) or _occurs(name, t.arg, s)
    return False


def unify(a: Term, b: Term, s: Subst | None = None) -> Subst | None:
    """Most general unifier of two binder-free terms, or None."""
    s = {} if s is None else dict(s)
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = _walk(x, s), _walk(y, s)
        if isinstance(x, Var) and isinstance(y, Var) and x.name == y.name:
            continue
        if isinstance(x, Var):
            if _occurs(x.name, y, s):
                return None
            s[x.name] = y
        elif isinstance(y, Var):
            if _occurs(y.name, x, s):
                return None
            s[y.name] = x
        elif isinstance(x, App) and isinstance(y, App):
            stack.append((x.head, y.head))
            stack.append((x.arg, y.arg))
        elif x != y:
            return None
    return s


def _rename_vars(t: Term, suffix: str) -> Term:
    if isinstance(t, Var):
        return Var(t.name + suffix)
    if isinstance(t, App):
        return App(_rename_vars(t.head, suffix), _rename_vars(t.arg, suffix))
    return t


def _nonvar_positions(t: Term, pos: Position = ()) -> Iterator[tuple[Position, Term]]:
    if isinstance(t, Var):
        return
    yield pos, t
    _, args = spine(t)
    for i, a in enumerate(args):
        yield from _nonvar_positions(a, arg_position(pos, len(args), i))


def _var_occurrences(t: Term) -> Counter[str]:
    return Counter(s.name for _, s in subterms(t) if isinstance(s, Var))


def orthogonality_lint(rules: Sequence[Rule], sig: Signature) -> list[LintWarning]:
    """Report non-left-linear rules, overlapping left-hand sides and
    patterns headed by constructors that have rules of their own.

    Overlaps are grouped per unordered pair of rules; each group lists every
    (outer, inner, position) site found.
    """
    warnings: list[LintWarning] = []
    for r in rules:
        repeated = sorted(v for v, n in _var_occurrences(r.lhs).items() if n > 1)
        if repeated:
            warnings.append(LintWarning(
                "NonLeftLinear",
                f"rule {r.index} ({r}) repeats variable(s) {', '.join(repeated)}",
                (r.index,),
            ))

    heads_with_rules = {r.head for r in rules}
    for r in rules:
        for i, a in enumerate(r.lhs_args):
            for pos, s in _nonvar_positions(a, arg_position((), len(r.lhs_args), i)):
                h, _ = spine(s)
                if isinstance(h, Symbol) and h.name in heads_with_rules:
                    warnings.append(LintWarning(
                        "DefinedPatternHead",
                        f"rule {r.index} matches on {h.name!r}, which has rules of its own",
                        (r.index,), pos,
                    ))

    sites: dict[tuple[int, int], list[tuple[int, int, Position]]] = {}
    for outer in rules:
        outer_lhs = _rename_vars(outer.lhs, "@1")
        for inner in rules:
            inner_lhs = _rename_vars(inner.lhs, "@2")
            for pos, sub in _nonvar_positions(outer_lhs):
                if pos == () and outer is inner:
                    continue
                if unify(sub, inner_lhs) is not None:
                    key = tuple(sorted((outer.index, inner.index)))
                    sites.setdefault(key, []).append((outer.index, inner.index, pos))
    by_index = {r.index: r for r in rules}
    for key in sorted(sites):
        a, b = by_index[key[0]], by_index[key[-1]]
        what = f"rule {a.index} ({a})" if a is b else f"rules {a.index} ({a}) and {b.index} ({b})"
        warnings.append(LintWarning(
            "Overlap", f"{what} overlap", key, None, tuple(sorted(sites[key])),
        ))

    order = {"NonLeftLinear": 0, "DefinedPatternHead": 1, "Overlap": 2}
    warnings.sort(key=lambda w: (w.rules, order[w.kind], w.position or ()))
    return warnings
