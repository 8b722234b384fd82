"""Argument graph data model: I-nodes, S-nodes, edges and a designated major claim.

Graphs are immutable values. Every mutating operation returns a new graph,
so a graph can be shared freely between worker threads.
"""

from __future__ import annotations

import enum
import json
import textwrap
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Any, Iterable, Optional

from .errors import GraphError, ParseError


class Stance(str, enum.Enum):
    SUPPORT = "Support"
    ATTACK = "Attack"


# AIF scheme node tags: RA = rule application (support), CA = conflict (attack)
_AIF_TYPE = {Stance.SUPPORT: "RA", Stance.ATTACK: "CA"}
_AIF_STANCE = {v: k for k, v in _AIF_TYPE.items()}

# field aliases accepted when reading AIFdb-style exports
_ID_KEYS = ("id", "nodeID")
_FROM_KEYS = ("from", "fromID")
_TO_KEYS = ("to", "toID")
_MC_KEYS = ("majorClaim", "major_claim")


@dataclass(frozen=True)
class Inode:
    id: str
    text: str
    source_span: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class Snode:
    id: str
    stance: Stance
    probability: Optional[float] = None


@dataclass(frozen=True, eq=False)
class ArgumentGraph:
    """Triple of node set, edge set and major claim.

    Node order is kept (it is the document order used for tie-breaking by the
    metrics) but equality ignores it.
    """

    inodes: tuple[Inode, ...] = ()
    snodes: tuple[Snode, ...] = ()
    edges: tuple[tuple[str, str], ...] = ()
    major_claim: Optional[str] = None

    @classmethod
    def single(cls, text: str, node_id: str = "0") -> "ArgumentGraph":
        """Graph holding only a major claim."""
        return cls(inodes=(Inode(node_id, text),), major_claim=node_id)

    # lookups -------------------------------------------------------------

    @cached_property
    def inode_map(self) -> dict[str, Inode]:
        return {n.id: n for n in self.inodes}

    @cached_property
    def snode_map(self) -> dict[str, Snode]:
        return {n.id: n for n in self.snodes}

    @cached_property
    def successors(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for a, b in self.edges:
            out.setdefault(a, []).append(b)
        return out

    @cached_property
    def predecessors(self) -> dict[str, list[str]]:
        inc: dict[str, list[str]] = {}
        for a, b in self.edges:
            inc.setdefault(b, []).append(a)
        return inc

    def node_ids(self) -> set[str]:
        return set(self.inode_map) | set(self.snode_map)

    def is_inode(self, node_id: str) -> bool:
        return node_id in self.inode_map

    def new_id(self) -> str:
        """Next free id: one past the largest integer id in use."""
        top = -1
        for n in (*self.inodes, *self.snodes):
            if n.id.isdigit():
                top = max(top, int(n.id))
        return str(top + 1)

    def triples(self) -> list[tuple[str, str, str]]:
        """All (I-node, S-node, I-node) paths of length two, in S-node order."""
        found = []
        for s in self.snodes:
            for x in self.predecessors.get(s.id, []):
                if x not in self.inode_map:
                    continue
                for z in self.successors.get(s.id, []):
                    if z in self.inode_map:
                        found.append((x, s.id, z))
        return found

    # equality on logical content ----------------------------------------

    def _content_key(self):
        return (
            frozenset(self.inodes),
            frozenset(self.snodes),
            frozenset(self.edges),
            self.major_claim,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArgumentGraph):
            return NotImplemented
        return self._content_key() == other._content_key()

    def __hash__(self) -> int:
        return hash(self._content_key())

    def __repr__(self) -> str:
        return (
            f"ArgumentGraph(|I|={len(self.inodes)}, |S|={len(self.snodes)}, "
            f"|E|={len(self.edges)}, major_claim={self.major_claim!r})"
        )


def _check_new_id(graph: ArgumentGraph, node_id: str) -> None:
    if node_id in graph.inode_map or node_id in graph.snode_map:
        raise GraphError(f"duplicate node id {node_id!r}")


def add_argument(graph: ArgumentGraph, premise: Inode, stance: Snode, claim_id: str) -> ArgumentGraph:
    """Attach a new premise to an existing I-node through a new S-node."""
    if claim_id not in graph.inode_map:
        raise GraphError(f"unknown claim id {claim_id!r}")
    _check_new_id(graph, premise.id)
    _check_new_id(graph, stance.id)
    if premise.id == stance.id:
        raise GraphError(f"duplicate node id {premise.id!r}")
    if not premise.text.strip():
        raise GraphError("I-node text must be non-empty")
    return replace(
        graph,
        inodes=graph.inodes + (premise,),
        snodes=graph.snodes + (stance,),
        edges=graph.edges + ((premise.id, stance.id), (stance.id, claim_id)),
    )


def add_relation(graph: ArgumentGraph, source_id: str, stance: Snode, target_id: str) -> ArgumentGraph:
    """Link two existing I-nodes through a new S-node.

    Refuses links that would close a cycle.
    """
    for node_id in (source_id, target_id):
        if node_id not in graph.inode_map:
            raise GraphError(f"unknown I-node id {node_id!r}")
    _check_new_id(graph, stance.id)
    if source_id == target_id or _reaches(graph, target_id, source_id):
        raise GraphError(f"link {source_id!r} -> {target_id!r} would create a cycle")
    return replace(
        graph,
        snodes=graph.snodes + (stance,),
        edges=graph.edges + ((source_id, stance.id), (stance.id, target_id)),
    )


def _reaches(graph: ArgumentGraph, start: str, goal: str) -> bool:
    stack, seen = [start], {start}
    while stack:
        node = stack.pop()
        if node == goal:
            return True
        for nxt in graph.successors.get(node, []):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def _find_cycle_nodes(graph: ArgumentGraph) -> list[str]:
    """Nodes left over by Kahn's algorithm, i.e. nodes on or behind a cycle."""
    nodes = graph.node_ids()
    indeg = {n: 0 for n in nodes}
    for a, b in graph.edges:
        if a in indeg and b in indeg:
            indeg[b] += 1
    queue = [n for n, d in indeg.items() if d == 0]
    while queue:
        n = queue.pop()
        for m in graph.successors.get(n, []):
            if m in indeg:
                indeg[m] -= 1
                if indeg[m] == 0:
                    queue.append(m)
    return sorted(n for n, d in indeg.items() if d > 0)


def validate(graph: ArgumentGraph) -> list[str]:
    """Return a list of human-readable violations; empty means well-formed."""
    problems: list[str] = []
    ids_seen: set[str] = set()
    for n in (*graph.inodes, *graph.snodes):
        if n.id in ids_seen:
            problems.append(f"node {n.id}: duplicate node id")
        ids_seen.add(n.id)
    for n in graph.inodes:
        if not n.text.strip():
            problems.append(f"I-node {n.id}: empty text")
        if n.source_span is not None:
            start, end = n.source_span
            if not 0 <= start < end:
                problems.append(f"I-node {n.id}: invalid source span {n.source_span}")
    for s in graph.snodes:
        if s.probability is not None and not 0.0 <= s.probability <= 1.0:
            problems.append(f"S-node {s.id}: probability {s.probability} outside [0, 1]")

    seen_edges: set[tuple[str, str]] = set()
    for a, b in graph.edges:
        if (a, b) in seen_edges:
            problems.append(f"edge {a}->{b}: duplicate edge")
        seen_edges.add((a, b))
        if a not in ids_seen or b not in ids_seen:
            problems.append(f"edge {a}->{b}: endpoint not in graph")
        elif graph.is_inode(a) and graph.is_inode(b):
            problems.append(f"edge {a}->{b}: edge bypasses scheme node")

    for s in graph.snodes:
        n_in = len(graph.predecessors.get(s.id, []))
        n_out = len(graph.successors.get(s.id, []))
        if n_in < 1:
            problems.append(f"S-node {s.id}: no incoming edge")
        if n_out != 1:
            problems.append(f"S-node {s.id}: {n_out} outgoing edges, expected 1")

    cyclic = _find_cycle_nodes(graph)
    if cyclic:
        problems.append(f"graph contains a cycle through {', '.join(cyclic)}")

    mc = graph.major_claim
    if mc is None:
        problems.append("graph must contain major claim")
    elif mc not in graph.inode_map:
        problems.append(f"major claim {mc}: not an I-node")
    else:
        if graph.successors.get(mc):
            problems.append(f"major claim {mc}: major claim not root")
        elif not cyclic:
            # reachability is only meaningful once the root itself is sound
            reaching = {mc}
            stack = [mc]
            while stack:
                for prev in graph.predecessors.get(stack.pop(), []):
                    if prev not in reaching:
                        reaching.add(prev)
                        stack.append(prev)
            for n in graph.inodes:
                if n.id not in reaching:
                    problems.append(f"I-node {n.id}: not connected to major claim")
    return problems


def graph_depth(graph: ArgumentGraph) -> int:
    """Number of I-node layers on the longest I-node path to the major claim."""
    problems = validate(graph)
    if problems:
        raise GraphError("invalid graph: " + "; ".join(problems))
    parents: dict[str, list[str]] = {}
    for x, _, z in graph.triples():
        parents.setdefault(x, []).append(z)
    depth: dict[str, int] = {graph.major_claim: 1}

    def layer(node_id: str) -> int:
        # iterative post-order; graph is acyclic so this terminates
        stack = [node_id]
        while stack:
            cur = stack[-1]
            if cur in depth:
                stack.pop()
                continue
            todo = [p for p in parents.get(cur, []) if p not in depth]
            if todo:
                stack.extend(todo)
            else:
                depth[cur] = 1 + max(depth[p] for p in parents[cur])
                stack.pop()
        return depth[node_id]

    return max(layer(n.id) for n in graph.inodes)


# serialization -------------------------------------------------------------


def to_aif_json(graph: ArgumentGraph) -> bytes:
    nodes: list[dict[str, Any]] = []
    for n in graph.inodes:
        d: dict[str, Any] = {"id": n.id, "type": "I", "text": n.text}
        if n.source_span is not None:
            d["span"] = list(n.source_span)
        nodes.append(d)
    for s in graph.snodes:
        d = {"id": s.id, "type": _AIF_TYPE[s.stance], "text": s.stance.value}
        if s.probability is not None:
            d["probability"] = s.probability
        nodes.append(d)
    doc = {
        "nodes": nodes,
        "edges": [{"from": a, "to": b} for a, b in graph.edges],
        "majorClaim": graph.major_claim,
    }
    return (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def _pick(d: dict, keys: Iterable[str], what: str):
    for k in keys:
        if k in d:
            return d[k]
    raise ParseError(f"{what}: missing field (one of {', '.join(keys)})")


def from_aif_json(data: bytes | str, require_major_claim: bool = True) -> ArgumentGraph:
    """Parse an AIF-style document.

    Besides the native schema, AIFdb exports (``nodeID``/``fromID``/``toID``)
    are accepted. Set ``require_major_claim=False`` for benchmark graphs that
    carry no major-claim annotation.
    """
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("malformed document: top level must be an object")
    raw_nodes = doc.get("nodes")
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_nodes, list) or not isinstance(raw_edges, list):
        raise ParseError("malformed document: 'nodes' and 'edges' must be arrays")

    inodes: list[Inode] = []
    snodes: list[Snode] = []
    for raw in raw_nodes:
        if not isinstance(raw, dict):
            raise ParseError("malformed document: node entries must be objects")
        node_id = str(_pick(raw, _ID_KEYS, "node"))
        tag = raw.get("type")
        if tag == "I":
            span = raw.get("span")
            inodes.append(Inode(node_id, str(raw.get("text", "")), tuple(span) if span is not None else None))
        elif tag in _AIF_STANCE:
            prob = raw.get("probability")
            snodes.append(Snode(node_id, _AIF_STANCE[tag], float(prob) if prob is not None else None))
        else:
            raise ParseError(f"node {node_id}: unknown node type tag {tag!r}")

    edges: list[tuple[str, str]] = []
    for raw in raw_edges:
        if not isinstance(raw, dict):
            raise ParseError("malformed document: edge entries must be objects")
        edges.append((str(_pick(raw, _FROM_KEYS, "edge")), str(_pick(raw, _TO_KEYS, "edge"))))

    mc = None
    for key in _MC_KEYS:
        if doc.get(key) is not None:
            mc = str(doc[key])
            break
    if not inodes and require_major_claim:
        raise ParseError("graph must contain major claim")
    if mc is None and require_major_claim:
        raise ParseError("missing major-claim annotation")
    if mc is not None and mc not in {n.id for n in inodes}:
        raise ParseError(f"major claim {mc!r} is not an I-node")
    return ArgumentGraph(tuple(inodes), tuple(snodes), tuple(edges), mc)


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(graph: ArgumentGraph, wrap: int = 40) -> str:
    """Render as a Graphviz digraph; the major claim is drawn bold and filled."""
    problems = validate(graph)
    if problems:
        raise GraphError("invalid graph: " + "; ".join(problems))
    lines = [
        "digraph argument_graph {",
        "  rankdir=BT;",
        '  node [shape=box, style=rounded, fontname="Helvetica"];',
    ]
    for n in graph.inodes:
        label = "\n".join(textwrap.wrap(n.text, wrap)) or n.text
        if n.id == graph.major_claim:
            attrs = 'style="rounded,filled,bold", fillcolor="lightblue", penwidth=2'
        else:
            attrs = 'style=rounded'
        lines.append(f"  {_dot_quote(n.id)} [label={_dot_quote(label)}, {attrs}];")
    for s in graph.snodes:
        if s.stance is Stance.SUPPORT:
            attrs = 'shape=ellipse, color="darkgreen", fontcolor="darkgreen"'
        else:
            attrs = 'shape=ellipse, color="red", fontcolor="red"'
        label = s.stance.value if s.probability is None else f"{s.stance.value}\n{s.probability:.2f}"
        lines.append(f"  {_dot_quote(s.id)} [label={_dot_quote(label)}, {attrs}];")
    for a, b in graph.edges:
        lines.append(f"  {_dot_quote(a)} -> {_dot_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
