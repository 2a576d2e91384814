"""Terms, symbols and signatures of the lambda-Pi calculus modulo rewriting.

A single term type covers kinds, types and objects.  Application is binary;
``f a b`` is ``App(App(f, a), b)``.  Positions inside a term are tuples of
child indices: for ``App`` 1 is the function and 2 the argument, for
``Lambda`` 1 is the annotation and 2 the body, for ``Product`` 1 is the
domain and 2 the codomain.
"""

from __future__ import annotations

import enum
import itertools
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from typing import Union

from sctlint.errors import UnknownSymbol

Position = tuple[int, ...]

ANONYMOUS = "_"


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Symbol:
    name: str


@dataclass(frozen=True, slots=True)
class App:
    head: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Lambda:
    bound: str
    annotation: Term
    body: Term


@dataclass(frozen=True, slots=True)
class Product:
    bound: str
    domain: Term
    codomain: Term


@dataclass(frozen=True, slots=True)
class SortType:
    pass


Term = Union[Var, Symbol, App, Lambda, Product, SortType]

TYPE = SortType()


def apply(head: Term, *args: Term) -> Term:
    """Build the left-nested spine ``head a1 ... an``."""
    for a in args:
        head = App(head, a)
    return head


def arrow(domain: Term, codomain: Term) -> Product:
    return Product(ANONYMOUS, domain, codomain)


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``h a1 ... an`` into ``(h, [a1, ..., an])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.head
    args.reverse()
    return t, args


def arg_position(pos: Position, nargs: int, i: int) -> Position:
    """Position of the i-th (0-based) argument of a spine of nargs arguments rooted at pos."""
    return pos + (1,) * (nargs - 1 - i) + (2,)


def prefix_position(pos: Position, nargs: int, k: int) -> Position:
    """Position of the sub-spine ``h a1 ... ak`` inside a spine of nargs arguments."""
    return pos + (1,) * (nargs - k)


def subterm_at(t: Term, pos: Position) -> Term:
    for step in pos:
        if isinstance(t, App):
            t = t.head if step == 1 else t.arg
        elif isinstance(t, Lambda):
            t = t.annotation if step == 1 else t.body
        elif isinstance(t, Product):
            t = t.domain if step == 1 else t.codomain
        else:
            raise IndexError(f"no position {pos} in term")
    return t


def subterms(t: Term, pos: Position = ()) -> Iterator[tuple[Position, Term]]:
    """Pre-order enumeration of every subterm with its position."""
    yield pos, t
    if isinstance(t, App):
        yield from subterms(t.head, pos + (1,))
        yield from subterms(t.arg, pos + (2,))
    elif isinstance(t, Lambda):
        yield from subterms(t.annotation, pos + (1,))
        yield from subterms(t.body, pos + (2,))
    elif isinstance(t, Product):
        yield from subterms(t.domain, pos + (1,))
        yield from subterms(t.codomain, pos + (2,))


def free_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return free_vars(t.head) | free_vars(t.arg)
    if isinstance(t, Lambda):
        return free_vars(t.annotation) | (free_vars(t.body) - {t.bound})
    if isinstance(t, Product):
        return free_vars(t.domain) | (free_vars(t.codomain) - {t.bound})
    return set()


def symbols_of(t: Term) -> set[str]:
    return {s.name for _, s in subterms(t) if isinstance(s, Symbol)}


def names_of(t: Term) -> set[str]:
    """Every name used in t: variables, binders and symbols."""
    out: set[str] = set()
    for _, s in subterms(t):
        if isinstance(s, (Var, Symbol)):
            out.add(s.name)
        elif isinstance(s, (Lambda, Product)):
            out.add(s.bound)
    return out


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def term_eq(a: Term, b: Term) -> bool:
    """Syntactic equality up to renaming of bound variables."""
    return _alpha_eq(a, b, {}, {}, 0)


def _alpha_eq(a: Term, b: Term, env_a: dict[str, int], env_b: dict[str, int], depth: int) -> bool:
    if isinstance(a, Var) and isinstance(b, Var):
        la, lb = env_a.get(a.name), env_b.get(b.name)
        if la is None and lb is None:
            return a.name == b.name
        return la == lb
    if type(a) is not type(b):
        return False
    if isinstance(a, Symbol):
        return a.name == b.name
    if isinstance(a, SortType):
        return True
    if isinstance(a, App):
        return _alpha_eq(a.head, b.head, env_a, env_b, depth) and _alpha_eq(
            a.arg, b.arg, env_a, env_b, depth
        )
    if isinstance(a, Lambda):
        first, second = (a.annotation, a.body), (b.annotation, b.body)
    else:
        first, second = (a.domain, a.codomain), (b.domain, b.codomain)
    if not _alpha_eq(first[0], second[0], env_a, env_b, depth):
        return False
    return _alpha_eq(
        first[1], second[1], {**env_a, a.bound: depth}, {**env_b, b.bound: depth}, depth + 1
    )


def rename_free(t: Term, old: str, new: str) -> Term:
    """Replace free occurrences of variable old by new; new must not occur in t."""
    if isinstance(t, Var):
        return Var(new) if t.name == old else t
    if isinstance(t, App):
        return App(rename_free(t.head, old, new), rename_free(t.arg, old, new))
    if isinstance(t, Lambda):
        body = t.body if t.bound == old else rename_free(t.body, old, new)
        return Lambda(t.bound, rename_free(t.annotation, old, new), body)
    if isinstance(t, Product):
        cod = t.codomain if t.bound == old else rename_free(t.codomain, old, new)
        return Product(t.bound, rename_free(t.domain, old, new), cod)
    return t


def rename_apart(t: Term, avoid: set[str] | frozenset[str]) -> Term:
    """Alpha-rename every binder of t whose name is in avoid.

    Positions are preserved, so call sites found in the result can be
    reported against the original term.
    """
    taken = set(avoid) | names_of(t)
    counter = itertools.count(1)

    def fresh(base: str) -> str:
        while True:
            name = f"{base}'{next(counter)}"
            if name not in taken:
                taken.add(name)
                return name

    def go(u: Term) -> Term:
        if isinstance(u, App):
            return App(go(u.head), go(u.arg))
        if isinstance(u, (Lambda, Product)):
            first = u.annotation if isinstance(u, Lambda) else u.domain
            second = u.body if isinstance(u, Lambda) else u.codomain
            bound = u.bound
            if bound in avoid:
                new = fresh(bound)
                second = rename_free(second, bound, new)
                bound = new
            return type(u)(bound, go(first), go(second))
        return u

    return go(t)


def arity_of(declared_type: Term) -> int:
    """Number of leading products of a declared type."""
    n = 0
    while isinstance(declared_type, Product):
        n += 1
        declared_type = declared_type.codomain
    return n


def codomain_of(declared_type: Term) -> Term:
    while isinstance(declared_type, Product):
        declared_type = declared_type.codomain
    return declared_type


class Level(enum.Enum):
    OBJECT_FUN = "ObjectFun"
    TYPE_CONST = "TypeConst"
    TYPE_FUN = "TypeFun"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SymbolInfo:
    name: str
    declared_type: Term
    level: Level
    arity: int
    definable: bool
    is_constructor: bool = False


class Signature(Mapping[str, SymbolInfo]):
    """Symbol table in declaration order."""

    def __init__(self, symbols: Mapping[str, SymbolInfo] | None = None):
        self._symbols: dict[str, SymbolInfo] = dict(symbols or {})

    def __getitem__(self, name: str) -> SymbolInfo:
        return self._symbols[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._symbols)

    def __len__(self) -> int:
        return len(self._symbols)

    def __repr__(self) -> str:
        return f"Signature({list(self._symbols)})"

    def lookup(self, name: str) -> SymbolInfo:
        try:
            return self._symbols[name]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {name!r}") from None

    def arity(self, name: str) -> int:
        return self.lookup(name).arity

    def is_constructor(self, name: str) -> bool:
        info = self._symbols.get(name)
        return info is not None and info.is_constructor

    def type_consts(self) -> set[str]:
        return {n for n, s in self._symbols.items() if s.level is Level.TYPE_CONST}


def level_of(declared_type: Term, definable: bool) -> Level:
    if isinstance(codomain_of(declared_type), SortType):
        return Level.TYPE_FUN if definable else Level.TYPE_CONST
    return Level.OBJECT_FUN


def _headed_by_type_const(t: Term, sig: Signature) -> bool:
    head, args = spine(t)
    if not isinstance(head, Symbol):
        return False
    info = sig.lookup(head.name)
    return info.level is Level.TYPE_CONST and len(args) == info.arity


def classify_constructor(symbol: SymbolInfo, sig: Signature) -> bool:
    """Shape test: every argument type and the result type are saturated type constants.

    Whether the symbol has rewrite rules plays no role.
    """
    if symbol.level is not Level.OBJECT_FUN:
        return False
    t = symbol.declared_type
    while isinstance(t, Product):
        if not _headed_by_type_const(t.domain, sig):
            return False
        t = t.codomain
    return _headed_by_type_const(t, sig)


def is_pattern(t: Term, sig: Signature) -> bool:
    if isinstance(t, Var):
        return True
    head, args = spine(t)
    if not isinstance(head, Symbol):
        return False
    info = sig.get(head.name)
    if info is None or not info.is_constructor or len(args) != info.arity:
        return False
    return all(is_pattern(a, sig) for a in args)
