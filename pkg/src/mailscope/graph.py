"""Weighted correspondent graph with reversible density-reduction edits.

Edges are unordered address pairs carrying the total email count plus the
per-direction counts. Node and edge removals push records onto a deletion
stack; undo pops in LIFO order and reinstates exactly what was removed,
including a node's incident edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

from .errors import EmptyUndoStack, UnknownEdge, UnknownNode
from .query import ResultSet
from .records import Address, EmailRecord

EdgeKey = tuple[str, str]


@dataclass
class EdgeCounts:
    """Directed counts for the unordered pair key=(a, b) with a <= b."""

    forward: int = 0  # a -> b
    backward: int = 0  # b -> a

    @property
    def weight(self) -> int:
        return self.forward + self.backward

    def copy(self) -> "EdgeCounts":
        return EdgeCounts(self.forward, self.backward)


@dataclass
class Removal:
    kind: str  # "node" | "edge"
    node: Address | None = None
    edge_key: EdgeKey | None = None
    edge_counts: EdgeCounts | None = None
    incident: dict[EdgeKey, EdgeCounts] = field(default_factory=dict)

    def redo_payload(self) -> dict:
        """Just enough to re-apply this removal on a freshly built graph."""
        if self.kind == "node":
            return {"kind": "node", "address": self.node.canonical}
        return {"kind": "edge", "a": self.edge_key[0], "b": self.edge_key[1]}


def edge_key(a: str, b: str) -> EdgeKey:
    return (a, b) if a <= b else (b, a)


class ContactGraph:
    def __init__(self, dataset_id: str = "", fingerprint: str = ""):
        self.dataset_id = dataset_id
        self.fingerprint = fingerprint
        self.nodes: dict[str, Address] = {}
        self.edges: dict[EdgeKey, EdgeCounts] = {}
        self.deletion_stack: list[Removal] = []

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ContactGraph):
            return NotImplemented
        return (
            set(self.nodes) == set(other.nodes)
            and self.edges == other.edges
            and [r.redo_payload() for r in self.deletion_stack]
            == [r.redo_payload() for r in other.deletion_stack]
        )

    def total_weight(self) -> int:
        return sum(e.weight for e in self.edges.values())


def build_graph(results: ResultSet, records: list[EmailRecord]) -> ContactGraph:
    """One node per address seen in the matched emails, one edge per
    communicating pair. A self-edge appears only when a sender addressed
    only themself."""
    g = ContactGraph(results.evaluated_against, results.stack_fingerprint)
    for record in records:
        if record.doc_id not in results.doc_ids:
            continue
        sender = record.sender
        g.nodes.setdefault(sender.canonical, sender)
        sole = len(record.recipients) == 1
        for recipient in record.recipients:
            g.nodes.setdefault(recipient.canonical, recipient)
            if recipient.canonical == sender.canonical and not sole:
                continue
            key = edge_key(sender.canonical, recipient.canonical)
            counts = g.edges.setdefault(key, EdgeCounts())
            if key[0] == sender.canonical:
                counts.forward += 1
            else:
                counts.backward += 1
    return g


def remove_node(g: ContactGraph, node: Address | str) -> ContactGraph:
    canonical = node.canonical if isinstance(node, Address) else node
    if canonical not in g.nodes:
        raise UnknownNode(canonical)
    incident = {
        key: counts.copy()
        for key, counts in g.edges.items()
        if canonical in key
    }
    removal = Removal(
        kind="node",
        node=g.nodes[canonical],
        incident=incident,
    )
    for key in incident:
        del g.edges[key]
    del g.nodes[canonical]
    g.deletion_stack.append(removal)
    return g


def remove_edge(g: ContactGraph, pair: tuple[str, str]) -> ContactGraph:
    key = edge_key(pair[0], pair[1])
    if key not in g.edges:
        raise UnknownEdge(f"{key[0]} -- {key[1]}")
    removal = Removal(kind="edge", edge_key=key, edge_counts=g.edges[key].copy())
    del g.edges[key]
    g.deletion_stack.append(removal)
    return g


def undo_removal(g: ContactGraph) -> ContactGraph:
    """Reinstate the most recent removal (LIFO)."""
    if not g.deletion_stack:
        raise EmptyUndoStack("nothing to undo")
    removal = g.deletion_stack.pop()
    if removal.kind == "edge":
        g.edges[removal.edge_key] = removal.edge_counts.copy()
    else:
        g.nodes[removal.node.canonical] = removal.node
        for key, counts in removal.incident.items():
            g.edges[key] = counts.copy()
    return g


def to_dot(g: ContactGraph) -> str:
    """Undirected DOT with weight and per-direction counts as attributes."""
    lines = ["graph contacts {"]
    for canonical in sorted(g.nodes):
        lines.append(f'  "{canonical}";')
    for (a, b) in sorted(g.edges):
        counts = g.edges[(a, b)]
        lines.append(
            f'  "{a}" -- "{b}" [weight={counts.weight}, forward={counts.forward}, '
            f"backward={counts.backward}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_graphml(g: ContactGraph) -> str:
    """GraphML with weight/forward/backward edge attributes."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>',
        '  <key id="forward" for="edge" attr.name="forward" attr.type="int"/>',
        '  <key id="backward" for="edge" attr.name="backward" attr.type="int"/>',
        '  <key id="name" for="node" attr.name="display_name" attr.type="string"/>',
        '  <graph id="contacts" edgedefault="undirected">',
    ]
    for canonical in sorted(g.nodes):
        addr = g.nodes[canonical]
        if addr.display_name:
            lines.append(f"    <node id={quoteattr(canonical)}>")
            lines.append(f'      <data key="name">{escape(addr.display_name)}</data>')
            lines.append("    </node>")
        else:
            lines.append(f"    <node id={quoteattr(canonical)}/>")
    for i, (a, b) in enumerate(sorted(g.edges)):
        counts = g.edges[(a, b)]
        lines.append(
            f"    <edge id=\"e{i}\" source={quoteattr(a)} target={quoteattr(b)}>"
        )
        lines.append(f'      <data key="weight">{counts.weight}</data>')
        lines.append(f'      <data key="forward">{counts.forward}</data>')
        lines.append(f'      <data key="backward">{counts.backward}</data>')
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"
