"""Graphviz export of a theorem's compiled derivation.

Edges become boxes, wires become point nodes, and the boundary shows up as
``in<i>`` / ``out<j>`` nodes. With values, every wire evaluated before the
run stopped is labelled with its tree; a failing edge is drawn red.
"""
from __future__ import annotations

import json

from .hypergraph import Edge, OpenHypergraph, Trace, compile_plus, run
from .proof import Env, TheoremStmt, check_graph, generic_leaves
from .syntax import FreshCounter, render_tree


def _q(text: str) -> str:
    return json.dumps(text)


def _groups(h: OpenHypergraph, first: int, level: str) -> tuple[dict[int, str], list[tuple[str, str]]]:
    """Diagram node id for each drawn edge, and the node declarations."""
    ids: dict[int, str] = {}
    nodes: list[tuple[str, str]] = []
    owners: dict[int, str] = {}
    for i in range(first, len(h.edges)):
        e = h.edges[i]
        if level == "proof" and e.owner is not None:
            key = id(e.owner)
            if key not in owners:
                owners[key] = f"g{len(owners)}"
                nodes.append((owners[key], e.owner.name))
            ids[i] = owners[key]
        else:
            ids[i] = f"e{i}"
            nodes.append((f"e{i}", str(e.label)))
    return ids, nodes


def _port(e: Edge, k: int, side: int, level: str) -> int | None:
    if level == "proof" and e.owner is not None:
        return e.owner_ports[side][k]
    return k


def to_dot(thm: TheoremStmt, env: Env, values: bool = False, level: str = "ir") -> str:
    """Draw the derivation part of the graph that :func:`check_theorem` evaluates.

    Edge ``e<i>`` is edge i of that graph, so failure reports and drawings agree.
    """
    if level not in ("ir", "proof"):
        raise ValueError(f"unknown level {level!r}")
    plus = compile_plus(thm.s)
    h = check_graph(thm, env)
    first = len(plus.edges)
    trace: Trace | None = None
    if values:
        trace = run(h, generic_leaves(thm.m), FreshCounter(thm.m))
    failed = trace.failure.edge if trace is not None and trace.failure is not None else None

    edge_ids, nodes = _groups(h, first, level)
    producer: dict[int, tuple[str, int | None]] = {}
    consumer: dict[int, tuple[str, int | None]] = {}
    for i, w in enumerate(plus.out_boundary):
        producer[w] = (f"in{i}", None)
    for j, w in enumerate(h.out_boundary):
        consumer[w] = (f"out{j}", None)
    for i in range(first, len(h.edges)):
        e = h.edges[i]
        for k, w in enumerate(e.outputs):
            producer[w] = (edge_ids[i], _port(e, k, 1, level))
        for k, w in enumerate(e.inputs):
            consumer[w] = (edge_ids[i], _port(e, k, 0, level))

    lines = [f"digraph {_q(thm.name)} {{", "  rankdir=LR;", '  node [fontname="monospace"];']
    for i in range(len(plus.out_boundary)):
        lines.append(f'  in{i} [shape=plaintext, label="in{i}"];')
    for j in range(len(h.out_boundary)):
        lines.append(f'  out{j} [shape=plaintext, label="out{j}"];')
    failed_node = edge_ids.get(failed) if failed is not None else None
    for node, label in nodes:
        style = ""
        if node == failed_node:
            label = f"{label}\n{trace.failure}"
            style = ", color=red, penwidth=2"
        lines.append(f"  {node} [shape=box, label={_q(label)}{style}];")
    for w in sorted(producer):
        (src, src_port), (dst, dst_port) = producer[w], consumer[w]
        if src == dst:
            continue  # internal to a collapsed generator
        value = trace.values[w] if trace is not None else None
        label = f", xlabel={_q(render_tree(value))}" if value is not None else ""
        lines.append(f"  w{w} [shape=point{label}];")
        tail = f" [taillabel={_q(str(src_port))}]" if src_port is not None else ""
        head = f" [headlabel={_q(str(dst_port))}]" if dst_port is not None else ""
        lines.append(f"  {src} -> w{w}{tail};")
        lines.append(f"  w{w} -> {dst}{head};")
    lines.append("}")
    return "\n".join(lines) + "\n"
