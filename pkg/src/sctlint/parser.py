"""Reader and printer for the Dedukti-like surface syntax.

    Nat : Type.
    def plus : Nat -> Nat -> Nat.
    [m,n] plus (S m) n --> S (plus m n).

Identifiers bound by a rule's ``[...]`` list or by an enclosing binder are
read as variables; every other identifier is read as a symbol.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Union

from sctlint.errors import (
    DuplicateBinder,
    DuplicateDeclaration,
    ParseError,
    RuleHeadUndeclared,
    UnknownSymbol,
)
from sctlint.terms import (
    ANONYMOUS,
    TYPE,
    App,
    Lambda,
    Product,
    Signature,
    SortType,
    Symbol,
    SymbolInfo,
    Term,
    Var,
    arity_of,
    classify_constructor,
    free_vars,
    level_of,
    spine,
    symbols_of,
)


@dataclass(frozen=True)
class Declaration:
    def_flag: bool
    name: str
    type_expr: Term
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class RawRule:
    bound_vars: tuple[str, ...]
    lhs: Term
    rhs: Term
    line: int = 0
    column: int = 0


Item = Union[Declaration, RawRule]


@dataclass
class SourceFile:
    items: list[Item] = field(default_factory=list)

    @property
    def declarations(self) -> list[Declaration]:
        return [i for i in self.items if isinstance(i, Declaration)]

    @property
    def rules(self) -> list[RawRule]:
        return [i for i in self.items if isinstance(i, RawRule)]


# --- lexing -----------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int


_TOKEN = re.compile(
    r"(?P<long_arrow>-->)|(?P<arrow>->)|(?P<fat_arrow>=>)"
    r"|(?P<punct>[()\[\]:.,])|(?P<ident>[A-Za-z0-9_']+)"
)
_KEYWORDS = {"def": "DEF", "Type": "TYPE", "_": "WILDCARD"}
_PUNCT = {"(": "LPAREN", ")": "RPAREN", "[": "LBRACK", "]": "RBRACK", ":": "COLON", ".": "DOT", ",": "COMMA"}
_DESCRIBE = {
    "LPAREN": "'('", "RPAREN": "')'", "LBRACK": "'['", "RBRACK": "']'", "COLON": "':'",
    "DOT": "'.'", "COMMA": "','", "ARROW": "'->'", "LONG_ARROW": "'-->'", "FAT_ARROW": "'=>'",
    "IDENT": "identifier", "DEF": "'def'", "TYPE": "'Type'", "WILDCARD": "'_'", "EOF": "end of file",
}


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(upto: int) -> None:
        nonlocal i, line, col
        chunk = text[i:upto]
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        i = upto

    while i < n:
        c = text[i]
        if c.isspace():
            advance(i + 1)
            continue
        if text.startswith("(;", i):
            start_line, start_col = line, col
            depth, j = 0, i
            while j < n:
                if text.startswith("(;", j):
                    depth += 1
                    j += 2
                elif text.startswith(";)", j):
                    depth -= 1
                    j += 2
                    if depth == 0:
                        break
                else:
                    j += 1
            if depth:
                raise ParseError("unterminated comment", start_line, start_col)
            advance(j)
            continue
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {c!r}", line, col)
        group = m.lastgroup
        value = m.group()
        if group == "ident":
            kind = _KEYWORDS.get(value, "IDENT")
        elif group == "punct":
            kind = _PUNCT[value]
        else:
            kind = group.upper()
        tokens.append(Token(kind, value, line, col))
        advance(m.end())
    tokens.append(Token("EOF", "", line, col))
    return tokens


# --- parsing ----------------------------------------------------------------

_ATOM_START = {"IDENT", "WILDCARD", "TYPE", "LPAREN"}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        # per-rule wildcard state; None outside rules
        self.fresh: list[str] | None = None
        self.taken: set[str] = set()

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, *expected: str) -> ParseError:
        t = self.tok
        found = _DESCRIBE[t.kind] if t.kind != "IDENT" else f"identifier {t.value!r}"
        return ParseError(
            f"unexpected {found}", t.line, t.column, frozenset(_DESCRIBE[e] for e in expected)
        )

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise self.error(kind)
        t = self.tok
        self.i += 1
        return t

    def parse_file(self) -> SourceFile:
        items: list[Item] = []
        while self.tok.kind != "EOF":
            if self.tok.kind == "LBRACK":
                items.append(self.rule())
            elif self.tok.kind in ("DEF", "IDENT"):
                items.append(self.declaration())
            else:
                raise self.error("LBRACK", "DEF", "IDENT", "EOF")
        return SourceFile(items)

    def declaration(self) -> Declaration:
        start = self.tok
        is_def = False
        if start.kind == "DEF":
            is_def = True
            self.i += 1
        name = self.expect("IDENT").value
        self.expect("COLON")
        ty = self.term(frozenset())
        self.expect("DOT")
        return Declaration(is_def, name, ty, start.line, start.column)

    def rule(self) -> RawRule:
        start = self.expect("LBRACK")
        names: list[str] = []
        if self.tok.kind != "RBRACK":
            while True:
                t = self.expect("IDENT")
                if t.value in names:
                    raise DuplicateBinder(f"variable {t.value!r} bound twice", t.line, t.column)
                names.append(t.value)
                if self.tok.kind != "COMMA":
                    break
                self.i += 1
        self.expect("RBRACK")

        j = self.i
        while self.toks[j].kind not in ("DOT", "EOF"):
            j += 1
        self.taken = {t.value for t in self.toks[self.i:j] if t.kind == "IDENT"} | set(names)
        self.fresh = []
        try:
            scope = frozenset(names)
            lhs = self.term(scope)
            self.expect("LONG_ARROW")
            rhs = self.term(scope)
            self.expect("DOT")
        finally:
            self.fresh = None
        return RawRule(tuple(names), lhs, rhs, start.line, start.column)

    def fresh_var(self) -> Var:
        assert self.fresh is not None
        k = len(self.fresh) + 1
        while f"_{k}" in self.taken:
            k += 1
        name = f"_{k}"
        self.taken.add(name)
        self.fresh.append(name)
        return Var(name)

    def term(self, scope: frozenset[str]) -> Term:
        if self.tok.kind == "LPAREN" and self.peek().kind == "IDENT" and self.peek(2).kind == "COLON":
            saved = self.i, None if self.fresh is None else list(self.fresh), set(self.taken)
            try:
                return self.named_product(scope)
            except ParseError:
                self.i, self.fresh, self.taken = saved
        left = self.app(scope)
        if self.tok.kind == "ARROW":
            self.i += 1
            return Product(ANONYMOUS, left, self.term(scope))
        return left

    def named_product(self, scope: frozenset[str]) -> Product:
        self.expect("LPAREN")
        name = self.expect("IDENT").value
        self.expect("COLON")
        dom = self.term(scope)
        self.expect("RPAREN")
        self.expect("ARROW")
        return Product(name, dom, self.term(scope | {name}))

    def app(self, scope: frozenset[str]) -> Term:
        if self.tok.kind not in _ATOM_START:
            raise self.error(*sorted(_ATOM_START))
        t = self.atom(scope)
        while self.tok.kind in _ATOM_START:
            t = App(t, self.atom(scope))
        return t

    def atom(self, scope: frozenset[str]) -> Term:
        t = self.tok
        if t.kind == "IDENT":
            if self.peek().kind == "COLON":
                return self.lambda_(scope)
            self.i += 1
            return Var(t.value) if t.value in scope else Symbol(t.value)
        if t.kind == "WILDCARD":
            if self.fresh is None:
                raise ParseError("wildcard '_' is only allowed inside rules", t.line, t.column)
            self.i += 1
            return self.fresh_var()
        if t.kind == "TYPE":
            self.i += 1
            return TYPE
        if t.kind == "LPAREN":
            self.i += 1
            inner = self.term(scope)
            self.expect("RPAREN")
            return inner
        raise self.error(*sorted(_ATOM_START))

    def lambda_(self, scope: frozenset[str]) -> Lambda:
        name = self.expect("IDENT").value
        self.expect("COLON")
        annotation = self.atom(scope)
        self.expect("FAT_ARROW")
        return Lambda(name, annotation, self.term(scope | {name}))


def parse(text: str | bytes) -> SourceFile:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(tokenize(text)).parse_file()


def parse_term(text: str, variables: frozenset[str] | set[str] = frozenset()) -> Term:
    """Parse a lone term; names in ``variables`` are read as free variables."""
    p = _Parser(tokenize(text))
    t = p.term(frozenset(variables))
    p.expect("EOF")
    return t


# --- signature --------------------------------------------------------------

def rule_head(rule: RawRule) -> str | None:
    head, _ = spine(rule.lhs)
    return head.name if isinstance(head, Symbol) else None


def build_signature(file: SourceFile) -> Signature:
    """Check declarations in order and classify every symbol.

    A symbol is definable when declared with ``def`` or when it heads a rule.
    Constructor flags are computed once all levels are known.
    """
    declared: dict[str, Declaration] = {}
    for decl in file.declarations:
        if decl.name in declared:
            raise DuplicateDeclaration(f"symbol {decl.name!r} declared twice", decl.line, decl.column)
        for name in sorted(symbols_of(decl.type_expr)):
            if name not in declared:
                raise UnknownSymbol(
                    f"symbol {name!r} used in the type of {decl.name!r} before its declaration",
                    decl.line, decl.column,
                )
        if free_vars(decl.type_expr):
            name = sorted(free_vars(decl.type_expr))[0]
            raise UnknownSymbol(f"unbound variable {name!r} in the type of {decl.name!r}", decl.line)
        declared[decl.name] = decl

    heads: set[str] = set()
    for rule in file.rules:
        head = rule_head(rule)
        if head is not None:
            if head not in declared:
                raise RuleHeadUndeclared(f"rule head {head!r} is not declared", rule.line, rule.column)
            heads.add(head)
        for name in sorted(symbols_of(rule.lhs) | symbols_of(rule.rhs)):
            if name not in declared:
                raise UnknownSymbol(f"unknown symbol {name!r} in rule", rule.line, rule.column)

    infos: dict[str, SymbolInfo] = {}
    for name, decl in declared.items():
        definable = decl.def_flag or name in heads
        infos[name] = SymbolInfo(
            name=name,
            declared_type=decl.type_expr,
            level=level_of(decl.type_expr, definable),
            arity=arity_of(decl.type_expr),
            definable=definable,
        )
    sig = Signature(infos)
    return Signature({
        name: replace(info, is_constructor=classify_constructor(info, sig))
        for name, info in infos.items()
    })


# --- printing ---------------------------------------------------------------

def format_term(t: Term, wildcards: frozenset[str] = frozenset()) -> str:
    """Render a term so that :func:`parse_term` reads it back alpha-equivalently.

    Variables listed in ``wildcards`` print as ``_``.
    """
    return _fmt(t, wildcards)


def _fmt(t: Term, wild: frozenset[str]) -> str:
    if isinstance(t, Product):
        dom = t.domain
        if t.bound == ANONYMOUS or t.bound not in free_vars(t.codomain):
            left = _fmt(dom, wild)
            if isinstance(dom, (Product, Lambda)):
                left = f"({left})"
            return f"{left} -> {_fmt(t.codomain, wild - {t.bound})}"
        return f"({t.bound} : {_fmt(dom, wild)}) -> {_fmt(t.codomain, wild - {t.bound})}"
    if isinstance(t, Lambda):
        return f"{t.bound} : {_fmt_atom(t.annotation, wild)} => {_fmt(t.body, wild - {t.bound})}"
    if isinstance(t, App):
        head, args = spine(t)
        return " ".join([_fmt_atom(head, wild)] + [_fmt_atom(a, wild) for a in args])
    return _fmt_atom(t, wild)


def _fmt_atom(t: Term, wild: frozenset[str]) -> str:
    if isinstance(t, Var):
        return "_" if t.name in wild else t.name
    if isinstance(t, Symbol):
        return t.name
    if isinstance(t, SortType):
        return "Type"
    return f"({_fmt(t, wild)})"


def format_item(item: Item) -> str:
    if isinstance(item, Declaration):
        prefix = "def " if item.def_flag else ""
        return f"{prefix}{item.name} : {format_term(item.type_expr)}."
    wild = frozenset(free_vars(item.lhs) - set(item.bound_vars))
    return (
        f"[{', '.join(item.bound_vars)}] {format_term(item.lhs, wild)}"
        f" --> {format_term(item.rhs, wild)}."
    )


def format_file(file: SourceFile) -> str:
    return "".join(format_item(i) + "\n" for i in file.items)
