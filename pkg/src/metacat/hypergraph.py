"""Open hypergraphs over spider, constructor and matcher edges.

Graphs are monogamous and acyclic: each wire has exactly one producer (an
edge output or an input-boundary position) and exactly one consumer (an edge
input or an output-boundary position). Every public constructor preserves this.

Evaluation interprets a graph as a partial function on tuples of trees:

* ``Spider(0, n)`` emits n copies of a fresh leaf;
* ``Spider(m, n)`` with m > 0 requires its m inputs equal and emits n copies;
* ``Ctor(g)`` builds ``g(t1, ..., tk)``;
* ``Match(g)`` takes ``g(t1, ..., tk)`` apart and is undefined on anything else.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import ArityMismatch, CyclicGraph, EqualityFailure, EvalFailure, MalformedGraph, MatchFailure
from .syntax import FreshCounter, Leaf, Node, OpSymbol, SyntaxMap, Tree, tree_equal


@dataclass(frozen=True)
class Spider:
    m: int
    n: int

    def __str__(self) -> str:
        return f"spider {self.m},{self.n}"


@dataclass(frozen=True)
class Ctor:
    op: OpSymbol

    def __str__(self) -> str:
        return f"{self.op.name}+"


@dataclass(frozen=True)
class Match:
    op: OpSymbol

    def __str__(self) -> str:
        return f"{self.op.name}-"


EdgeLabel = Union[Spider, Ctor, Match]


def label_arity(label: EdgeLabel) -> tuple[int, int]:
    if isinstance(label, Spider):
        return label.m, label.n
    if isinstance(label, Ctor):
        return label.op.arity, 1
    return 1, label.op.arity


class Owner:
    """Tags the edges compiled from one generator occurrence (diagram grouping only)."""

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return f"Owner({self.name!r})"


@dataclass(frozen=True)
class Edge:
    label: EdgeLabel
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    owner: Owner | None = field(default=None, compare=False)
    # per port: position on the owner's boundary, or None for internal wires
    owner_ports: tuple[tuple[int | None, ...], tuple[int | None, ...]] | None = field(
        default=None, compare=False
    )


@dataclass(frozen=True)
class OpenHypergraph:
    wire_count: int
    edges: tuple[Edge, ...]
    in_boundary: tuple[int, ...]
    out_boundary: tuple[int, ...]

    def __post_init__(self):
        self._validate()

    @property
    def arity(self) -> tuple[int, int]:
        return len(self.in_boundary), len(self.out_boundary)

    def _validate(self) -> None:
        producers = [0] * self.wire_count
        consumers = [0] * self.wire_count
        try:
            for w in self.in_boundary:
                producers[w] += 1
            for w in self.out_boundary:
                consumers[w] += 1
            for e in self.edges:
                if label_arity(e.label) != (len(e.inputs), len(e.outputs)):
                    raise MalformedGraph(f"edge {e.label} has wrong port counts")
                for w in e.inputs:
                    consumers[w] += 1
                for w in e.outputs:
                    producers[w] += 1
        except IndexError:
            raise MalformedGraph("wire id out of range") from None
        for w in range(self.wire_count):
            if producers[w] != 1 or consumers[w] != 1:
                raise MalformedGraph(
                    f"wire {w} has {producers[w]} producers and {consumers[w]} consumers"
                )
        # monogamy makes a producer->consumer order well defined; reject cycles now
        topological_order(self)

    def producer_edges(self) -> list[int | None]:
        """For each wire, the index of the edge producing it (None for inputs)."""
        producer: list[int | None] = [None] * self.wire_count
        for i, e in enumerate(self.edges):
            for w in e.outputs:
                producer[w] = i
        return producer


def _trusted(wire_count, edges, in_boundary, out_boundary) -> OpenHypergraph:
    """Build without validation; only for results of invariant-preserving operations."""
    h = object.__new__(OpenHypergraph)
    for name, value in (
        ("wire_count", wire_count),
        ("edges", tuple(edges)),
        ("in_boundary", tuple(in_boundary)),
        ("out_boundary", tuple(out_boundary)),
    ):
        object.__setattr__(h, name, value)
    return h


def topological_order(h: OpenHypergraph) -> list[int]:
    """Kahn's algorithm, ties broken by ascending edge index."""
    producer = h.producer_edges()
    indegree = [0] * len(h.edges)
    dependents: list[list[int]] = [[] for _ in h.edges]
    for i, e in enumerate(h.edges):
        for w in e.inputs:
            p = producer[w]
            if p is not None:
                indegree[i] += 1
                dependents[p].append(i)
    ready = [i for i, d in enumerate(indegree) if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for j in dependents[i]:
            indegree[j] -= 1
            if indegree[j] == 0:
                heapq.heappush(ready, j)
    if len(order) != len(h.edges):
        raise CyclicGraph("hypergraph has a cycle")
    return order


def hg_identity(n: int) -> OpenHypergraph:
    wires = tuple(range(n))
    return OpenHypergraph(n, (), wires, wires)


def hg_symmetry(a: int, b: int) -> OpenHypergraph:
    wires = tuple(range(a + b))
    return OpenHypergraph(a + b, (), wires, wires[a:] + wires[:a])


def hg_spider(m: int, n: int) -> OpenHypergraph:
    edge = Edge(Spider(m, n), tuple(range(m)), tuple(range(m, m + n)))
    return OpenHypergraph(m + n, (edge,), edge.inputs, edge.outputs)


def hg_edge(label: EdgeLabel) -> OpenHypergraph:
    """A graph holding one edge with its ports exposed as the boundary."""
    a, b = label_arity(label)
    edge = Edge(label, tuple(range(a)), tuple(range(a, a + b)))
    return OpenHypergraph(a + b, (edge,), edge.inputs, edge.outputs)


def _relabel(h: OpenHypergraph, wire: list[int]) -> list[Edge]:
    return [
        Edge(
            e.label,
            tuple(wire[w] for w in e.inputs),
            tuple(wire[w] for w in e.outputs),
            e.owner,
            e.owner_ports,
        )
        for e in h.edges
    ]


def hg_sequential(h1: OpenHypergraph, h2: OpenHypergraph) -> OpenHypergraph:
    if len(h1.out_boundary) != len(h2.in_boundary):
        raise ArityMismatch(
            f"cannot compose {h1.arity[0]}->{h1.arity[1]} with {h2.arity[0]}->{h2.arity[1]}"
        )
    # h2's input wires are identified with h1's output wires; the rest are renumbered
    wire = [-1] * h2.wire_count
    for w1, w2 in zip(h1.out_boundary, h2.in_boundary):
        wire[w2] = w1
    next_id = h1.wire_count
    for w in range(h2.wire_count):
        if wire[w] < 0:
            wire[w] = next_id
            next_id += 1
    return _trusted(
        next_id,
        h1.edges + tuple(_relabel(h2, wire)),
        h1.in_boundary,
        tuple(wire[w] for w in h2.out_boundary),
    )


def hg_parallel(h1: OpenHypergraph, h2: OpenHypergraph) -> OpenHypergraph:
    shift = h1.wire_count
    wire = [w + shift for w in range(h2.wire_count)]
    return _trusted(
        h1.wire_count + h2.wire_count,
        h1.edges + tuple(_relabel(h2, wire)),
        h1.in_boundary + tuple(wire[w] for w in h2.in_boundary),
        h1.out_boundary + tuple(wire[w] for w in h2.out_boundary),
    )


def with_owner(h: OpenHypergraph, owner: Owner) -> OpenHypergraph:
    """Tag every edge of ``h`` as belonging to ``owner``, remembering boundary ports."""
    in_pos = {w: i for i, w in enumerate(h.in_boundary)}
    out_pos = {w: j for j, w in enumerate(h.out_boundary)}
    edges = tuple(
        Edge(
            e.label,
            e.inputs,
            e.outputs,
            owner,
            (tuple(in_pos.get(w) for w in e.inputs), tuple(out_pos.get(w) for w in e.outputs)),
        )
        for e in h.edges
    )
    return _trusted(h.wire_count, edges, h.in_boundary, h.out_boundary)


class _Builder:
    def __init__(self):
        self.wire_count = 0
        self.edges: list[Edge] = []

    def wire(self) -> int:
        self.wire_count += 1
        return self.wire_count - 1

    def wires(self, k: int) -> tuple[int, ...]:
        return tuple(self.wire() for _ in range(k))

    def edge(self, label: EdgeLabel, inputs: Sequence[int], outputs: Sequence[int]) -> None:
        self.edges.append(Edge(label, tuple(inputs), tuple(outputs)))


def compile_plus(u: SyntaxMap) -> OpenHypergraph:
    """Term construction: copy/discard spiders per metavariable, then one Ctor per node."""
    b = _Builder()
    inputs = b.wires(u.m)
    copies = []
    for i, k in enumerate(u.usage()):
        outs = b.wires(k)
        b.edge(Spider(1, k), (inputs[i],), outs)
        copies.append(list(reversed(outs)))

    def build(t: Tree) -> int:
        if isinstance(t, Leaf):
            return copies[t.id].pop()
        args = [build(c) for c in t.children]
        out = b.wire()
        b.edge(Ctor(t.op), args, (out,))
        return out

    outputs = tuple(build(t) for t in u.outputs)
    return OpenHypergraph(b.wire_count, tuple(b.edges), inputs, outputs)


def compile_minus(u: SyntaxMap) -> OpenHypergraph:
    """Pattern matching: one Match per node, then an equality spider per metavariable."""
    b = _Builder()
    inputs = b.wires(u.n)
    occurrences: list[list[int]] = [[] for _ in range(u.m)]

    def take_apart(t: Tree, w: int) -> None:
        if isinstance(t, Leaf):
            occurrences[t.id].append(w)
            return
        outs = b.wires(t.op.arity)
        b.edge(Match(t.op), (w,), outs)
        for c, cw in zip(t.children, outs):
            take_apart(c, cw)

    for t, w in zip(u.outputs, inputs):
        take_apart(t, w)
    outputs = []
    for occ in occurrences:
        out = b.wire()
        b.edge(Spider(len(occ), 1), occ, (out,))
        outputs.append(out)
    return OpenHypergraph(b.wire_count, tuple(b.edges), inputs, tuple(outputs))


def describe_edge(e: Edge) -> str:
    return f"{e.label} in {e.owner.name}" if e.owner is not None else str(e.label)


@dataclass
class Trace:
    """Wire values after a run; ``failure`` is set when evaluation stopped early."""

    values: list[Tree | None]
    failure: EvalFailure | None = None
    order: list[int] = field(default_factory=list)


def run(h: OpenHypergraph, inputs: Sequence[Tree], fresh: FreshCounter) -> Trace:
    if len(inputs) != len(h.in_boundary):
        raise ArityMismatch(f"graph expects {len(h.in_boundary)} inputs, got {len(inputs)}")
    values: list[Tree | None] = [None] * h.wire_count
    for w, t in zip(h.in_boundary, inputs):
        values[w] = t
    trace = Trace(values)
    for i in topological_order(h):
        e = h.edges[i]
        args = [values[w] for w in e.inputs]
        label = e.label
        if isinstance(label, Spider):
            if label.m == 0:
                out = [fresh.leaf()] * label.n
            else:
                first = args[0]
                for other in args[1:]:
                    if not tree_equal(first, other):
                        trace.failure = EqualityFailure(i, first, other, describe_edge(e))
                        return trace
                out = [first] * label.n
        elif isinstance(label, Ctor):
            out = [Node(label.op, tuple(args))]
        else:
            t = args[0]
            if isinstance(t, Leaf) or t.op != label.op:
                trace.failure = MatchFailure(i, label.op.name, t, describe_edge(e))
                return trace
            out = t.children
        for w, v in zip(e.outputs, out):
            values[w] = v
        trace.order.append(i)
    return trace


def evaluate(h: OpenHypergraph, inputs: Sequence[Tree], fresh: FreshCounter) -> tuple[Tree, ...]:
    """Evaluate ``h`` on ``inputs``; raises :class:`EvalFailure` where undefined."""
    trace = run(h, inputs, fresh)
    if trace.failure is not None:
        raise trace.failure
    return tuple(trace.values[w] for w in h.out_boundary)
