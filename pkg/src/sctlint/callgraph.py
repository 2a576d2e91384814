"""Call extraction and call matrices.

A call matrix for a call from ``f p1..pm`` to ``g t1..tn`` has one row per
caller pattern and one column per call argument.  Entry (i, j) says how
``tj`` relates to ``pi``: strictly smaller in the constructor subterm order
(-1), equal (0) or unknown (?).

Entries form a tropical semiring: paths compose by saturated addition, where
unknown absorbs everything, and alternative paths are chosen by minimum.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass

from sctlint.errors import DimensionMismatch
from sctlint.rules import LintWarning, Rule
from sctlint.terms import (
    Lambda,
    Position,
    Product,
    Signature,
    Symbol,
    Term,
    arg_position,
    prefix_position,
    rename_apart,
    spine,
    term_eq,
)


class SizeEntry(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    UNKNOWN = 1

    def __str__(self) -> str:
        return "?" if self is SizeEntry.UNKNOWN else str(self.value)

    @classmethod
    def parse(cls, text: str) -> SizeEntry:
        return {"-1": cls.LESS, "0": cls.EQUAL, "?": cls.UNKNOWN}[text]


def entry_compose(a: SizeEntry, b: SizeEntry) -> SizeEntry:
    if a is SizeEntry.UNKNOWN or b is SizeEntry.UNKNOWN:
        return SizeEntry.UNKNOWN
    return SizeEntry(max(a + b, -1))


def entry_choose(a: SizeEntry, b: SizeEntry) -> SizeEntry:
    return min(a, b)


@dataclass(frozen=True)
class CallMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[SizeEntry, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch(f"entries do not form a {self.rows}x{self.cols} matrix")

    @classmethod
    def of(cls, rows: Sequence[Sequence[SizeEntry | int | str]], cols: int | None = None) -> CallMatrix:
        """Build from nested rows; entries may be SizeEntry, -1/0 or '?'."""

        def conv(e) -> SizeEntry:
            if isinstance(e, SizeEntry):
                return e
            if isinstance(e, str):
                return SizeEntry.parse(e)
            return SizeEntry(e)

        entries = tuple(tuple(conv(e) for e in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, entries)

    @classmethod
    def parse(cls, text: str, rows: int | None = None, cols: int | None = None) -> CallMatrix:
        """Inverse of ``str``; dimensions must be given for empty matrices."""
        body = text.strip()[1:-1].strip()
        if not body:
            return cls(rows or 0, cols or 0, ((),) * (rows or 0))
        return cls.of([r.split() for r in body.split(";")])

    @classmethod
    def identity(cls, n: int) -> CallMatrix:
        return cls(n, n, tuple(
            tuple(SizeEntry.EQUAL if i == j else SizeEntry.UNKNOWN for j in range(n))
            for i in range(n)
        ))

    def __getitem__(self, ij: tuple[int, int]) -> SizeEntry:
        return self.entries[ij[0]][ij[1]]

    def __matmul__(self, other: CallMatrix) -> CallMatrix:
        return matrix_mul(self, other)

    def diagonal(self) -> list[SizeEntry]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def has_decrease_on_diagonal(self) -> bool:
        return SizeEntry.LESS in self.diagonal()

    def is_idempotent(self) -> bool:
        return self.rows == self.cols and self @ self == self

    def __str__(self) -> str:
        if not self.rows or not self.cols:
            return "[]"
        return "[" + "; ".join(" ".join(str(e) for e in r) for r in self.entries) + "]"


def matrix_mul(a: CallMatrix, b: CallMatrix) -> CallMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot compose {a.rows}x{a.cols} with {b.rows}x{b.cols}")
    entries = []
    for i in range(a.rows):
        row = []
        for k in range(b.cols):
            best = SizeEntry.UNKNOWN
            for j in range(a.cols):
                best = entry_choose(best, entry_compose(a.entries[i][j], b.entries[j][k]))
            row.append(best)
        entries.append(tuple(row))
    return CallMatrix(a.rows, b.cols, tuple(entries))


# --- size comparison --------------------------------------------------------

def strict_subterm(t: Term, p: Term, sig: Signature) -> bool:
    """Whether t sits strictly below a constructor application inside p."""
    head, args = spine(p)
    if not isinstance(head, Symbol) or not sig.is_constructor(head.name):
        return False
    if len(args) != sig[head.name].arity:
        return False
    return any(term_eq(t, q) or strict_subterm(t, q, sig) for q in args)


def compare(t: Term, p: Term, sig: Signature) -> SizeEntry:
    if strict_subterm(t, p, sig):
        return SizeEntry.LESS
    if term_eq(t, p):
        return SizeEntry.EQUAL
    return SizeEntry.UNKNOWN


def call_matrix(lhs_args: Sequence[Term], call_args: Sequence[Term], sig: Signature) -> CallMatrix:
    return CallMatrix(len(lhs_args), len(call_args), tuple(
        tuple(compare(t, p, sig) for t in call_args) for p in lhs_args
    ))


# --- calls ------------------------------------------------------------------

@dataclass(frozen=True)
class Call:
    caller: str
    callee: str
    matrix: CallMatrix
    rule: int
    position: Position

    @property
    def origin(self) -> tuple[int, Position]:
        return self.rule, self.position

    def to_json(self) -> dict:
        return {
            "caller": self.caller,
            "callee": self.callee,
            "matrix": str(self.matrix),
            "rule": self.rule,
            "position": list(self.position),
        }


def call_sites(t: Term, sig: Signature, pos: Position = ()):
    """Yield ``(position, symbol, args)`` for every saturated symbol spine in t,
    and ``(position, symbol, None)`` for under-applied ones.

    Over-applied spines yield the saturated prefix.
    """
    head, args = spine(t)
    n = len(args)
    if isinstance(head, Symbol) and head.name in sig:
        k = sig[head.name].arity
        if n >= k:
            yield prefix_position(pos, n, k), head.name, args[:k]
        else:
            yield pos, head.name, None
    elif isinstance(head, Lambda):
        yield from call_sites(head.annotation, sig, prefix_position(pos, n, 0) + (1,))
        yield from call_sites(head.body, sig, prefix_position(pos, n, 0) + (2,))
    elif isinstance(head, Product):
        yield from call_sites(head.domain, sig, prefix_position(pos, n, 0) + (1,))
        yield from call_sites(head.codomain, sig, prefix_position(pos, n, 0) + (2,))
    for i, a in enumerate(args):
        yield from call_sites(a, sig, arg_position(pos, n, i))


def extract_calls(rule: Rule, sig: Signature, warnings: list[LintWarning] | None = None) -> list[Call]:
    """Every call from the rule's head to a declared symbol occurring in its
    right-hand side, including under binders and inside type annotations.

    Under-applied occurrences are reported to ``warnings`` instead.
    """
    rhs = rename_apart(rule.rhs, rule.vars)
    calls = []
    for pos, name, args in call_sites(rhs, sig):
        if args is None:
            if warnings is not None:
                warnings.append(LintWarning(
                    "PartialApplication",
                    f"rule {rule.index}: {name!r} is not applied to its {sig[name].arity} arguments",
                    (rule.index,), pos,
                ))
            continue
        calls.append(Call(rule.head, name, call_matrix(rule.lhs_args, args, sig), rule.index, pos))
    return calls
