"""Call graph closure and the size-change termination test."""

from __future__ import annotations

import enum
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from sctlint.callgraph import Call, CallMatrix
from sctlint.errors import DimensionMismatch

Edge = tuple[str, str]


@dataclass
class CallGraph:
    arity: dict[str, int]
    edges: dict[Edge, frozenset[CallMatrix]] = field(default_factory=dict)
    calls: tuple[Call, ...] = ()

    @classmethod
    def from_calls(
        cls, calls: Iterable[Call], arity: Mapping[str, int], nodes: Iterable[str] = ()
    ) -> CallGraph:
        """Graph over ``nodes`` plus every caller and callee.

        ``calls`` are kept, ordered by origin, as the edge origins used for witnesses.
        """
        calls = tuple(sorted(calls, key=lambda c: c.origin))
        names = set(nodes) | {c.caller for c in calls} | {c.callee for c in calls}
        g = cls({n: arity[n] for n in sorted(names)}, {}, calls)
        for c in calls:
            g._add(c.caller, c.callee, c.matrix)
        return g

    @property
    def nodes(self) -> list[str]:
        return sorted(self.arity)

    def _add(self, f: str, h: str, m: CallMatrix) -> bool:
        if (m.rows, m.cols) != (self.arity[f], self.arity[h]):
            raise DimensionMismatch(
                f"matrix {m} on {f} -> {h} should be {self.arity[f]}x{self.arity[h]}"
            )
        current = self.edges.get((f, h), frozenset())
        if m in current:
            return False
        self.edges[(f, h)] = current | {m}
        return True

    def triples(self) -> list[tuple[str, str, CallMatrix]]:
        return [
            (f, h, m)
            for (f, h) in sorted(self.edges)
            for m in sorted(self.edges[(f, h)], key=str)
        ]

    def edge_count(self) -> int:
        return sum(len(ms) for ms in self.edges.values())

    def loops(self, f: str) -> list[CallMatrix]:
        return sorted(self.edges.get((f, f), ()), key=str)


def closure(g: CallGraph) -> CallGraph:
    """Close the matrix sets of g under composition along edges.

    Worklist fixpoint: each newly added (f, h, M) is composed with every edge
    already present that ends in f or starts in h.
    """
    out = CallGraph(dict(g.arity), {}, g.calls)
    succ: dict[str, list[tuple[str, CallMatrix]]] = {}
    pred: dict[str, list[tuple[str, CallMatrix]]] = {}
    work: deque[tuple[str, str, CallMatrix]] = deque()

    def add(f: str, h: str, m: CallMatrix) -> None:
        if out._add(f, h, m):
            succ.setdefault(f, []).append((h, m))
            pred.setdefault(h, []).append((f, m))
            work.append((f, h, m))

    for f, h, m in g.triples():
        add(f, h, m)
    while work:
        f, h, m = work.popleft()
        for e, a in list(pred.get(f, ())):
            add(e, h, a @ m)
        for k, b in list(succ.get(h, ())):
            add(f, k, m @ b)
    return out


class Mode(enum.Enum):
    IDEMPOTENT = "idempotent"
    ALL_LOOPS = "all-loops"

    def __str__(self) -> str:
        return self.value


class Status(enum.Enum):
    HOLDS = "SctHolds"
    FAILS = "SctFails"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Failure:
    symbol: str
    matrix: CallMatrix
    witness: tuple[Call, ...]

    def to_json(self) -> dict:
        return {
            "symbol": self.symbol,
            "matrix": str(self.matrix),
            "witness": [
                {"caller": c.caller, "callee": c.callee, "rule": c.rule, "position": list(c.position)}
                for c in self.witness
            ],
        }


@dataclass(frozen=True)
class Verdict:
    mode: Mode
    failures: tuple[Failure, ...] = ()

    @property
    def status(self) -> Status:
        return Status.FAILS if self.failures else Status.HOLDS

    @property
    def holds(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "mode": str(self.mode),
            "status": str(self.status),
            "failures": [f.to_json() for f in self.failures],
        }


def shortest_witness(g: CallGraph, f: str, target: CallMatrix, end: str | None = None) -> tuple[Call, ...]:
    """Fewest original calls from f to ``end`` (default f) whose product is target.

    Breadth-first over (node, product) states; calls are tried in origin
    order so ties go to the lowest (rule, position).
    """
    end = f if end is None else end
    outgoing: dict[str, list[Call]] = {}
    for c in g.calls:
        outgoing.setdefault(c.caller, []).append(c)
    queue: deque[tuple[str, CallMatrix, tuple[Call, ...]]] = deque()
    seen: set[tuple[str, CallMatrix]] = set()
    for c in outgoing.get(f, ()):
        state = (c.callee, c.matrix)
        if state not in seen:
            seen.add(state)
            queue.append((c.callee, c.matrix, (c,)))
    while queue:
        node, m, path = queue.popleft()
        if node == end and m == target:
            return path
        for c in outgoing.get(node, ()):
            nm = m @ c.matrix
            if (c.callee, nm) not in seen:
                seen.add((c.callee, nm))
                queue.append((c.callee, nm, path + (c,)))
    return ()


def loop_is_checked(m: CallMatrix, mode: Mode) -> bool:
    return mode is Mode.ALL_LOOPS or m.is_idempotent()


def sct_check(closed: CallGraph, mode: Mode = Mode.IDEMPOTENT) -> Verdict:
    """Every checked self-loop of the closure needs a -1 on its diagonal.

    ALL_LOOPS checks every self-loop; IDEMPOTENT only those with M @ M == M.
    """
    failures = []
    for f in closed.nodes:
        for m in closed.loops(f):
            if loop_is_checked(m, mode) and not m.has_decrease_on_diagonal():
                failures.append(Failure(f, m, shortest_witness(closed, f, m)))
    failures.sort(key=lambda x: (x.symbol, len(x.witness), str(x.matrix)))
    return Verdict(mode, tuple(failures))


def _dot_id(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: CallGraph) -> str:
    if not g.arity:
        return "digraph calls { }"
    lines = ["digraph calls {"]
    for n in g.nodes:
        lines.append(f"  {_dot_id(n)};")
    for f, h, m in g.triples():
        lines.append(f'  {_dot_id(f)} -> {_dot_id(h)} [label="{m}"];')
    lines.append("}")
    return "\n".join(lines)
