"""Open diagrams of colored weighted spiders, Hadamard nodes and wires.

Diagrams are immutable values: construction validates, rewrites build new
diagrams.  Each node exposes numbered ports; ports ``0..ins-1`` are its
input-side legs and ``ins..ins+outs-1`` its output-side legs, so arity is
derived from wire incidence plus this explicit split.  Boundary ports are
ordered and part of diagram identity.

Wires are an (unordered-endpoint) multiset; parallel wires between two
spiders are kept explicitly because fusion must count connecting legs.
Hadamard is a node kind of fixed degree 2, not an edge decoration.

Serialized form (UTF-8 JSON)::

    {"inputs": [0, 1, ...], "outputs": [0, ...],
     "nodes": [{"id": ..., "kind": "Z"|"X"|"H", "ins": int,
                "a": int, "alpha": {"num", "den"}, "k": {"num", "den"}}, ...],
     "wires": [[endpoint, endpoint], ...]}

with endpoints ``{"node": id, "port": int}`` or
``{"boundary": "in"|"out", "pos": int}``.  Hadamard nodes omit the label
fields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import (
    BoundarySlotConflict,
    DanglingWire,
    DuplicateId,
    ParseError,
)
from .phase import RationalAngle, SpiderLabel

NodeId = Union[int, str]

Z = "Z"
X = "X"
H = "H"
SPIDER_KINDS = (Z, X)
NODE_KINDS = (Z, X, H)

IN = "in"
OUT = "out"


def _id_key(i: NodeId):
    return (0, "", i) if isinstance(i, int) else (1, str(i), 0)


@dataclass(frozen=True)
class Node:
    id: NodeId
    kind: str
    label: SpiderLabel | None = None
    ins: int = 1
    outs: int = 1

    def __post_init__(self) -> None:
        if self.kind not in NODE_KINDS:
            raise ValueError(f"unknown node kind {self.kind!r}")
        if self.kind == H:
            if self.label is not None:
                raise ValueError("Hadamard nodes carry no spider label")
            if (self.ins, self.outs) != (1, 1):
                raise ValueError("Hadamard nodes have exactly one input and one output")
        else:
            if self.label is None:
                raise ValueError("spiders require a label")
        if self.ins < 0 or self.outs < 0:
            raise ValueError("arities must be non-negative")

    @property
    def degree(self) -> int:
        return self.ins + self.outs

    def is_spider(self) -> bool:
        return self.kind in SPIDER_KINDS

    def port_side(self, port: int) -> str:
        if not 0 <= port < self.degree:
            raise ValueError(f"port {port} out of range for node {self.id}")
        return IN if port < self.ins else OUT


@dataclass(frozen=True)
class NodePort:
    node: NodeId
    port: int

    def key(self):
        return (0, _id_key(self.node), self.port)


@dataclass(frozen=True)
class BoundaryPort:
    side: str  # IN or OUT
    pos: int

    def __post_init__(self) -> None:
        if self.side not in (IN, OUT):
            raise ValueError(f"boundary side must be 'in' or 'out', got {self.side!r}")

    def key(self):
        return (1, (0, self.side, 0), self.pos)


Endpoint = Union[NodePort, BoundaryPort]


@dataclass(frozen=True)
class Wire:
    a: Endpoint
    b: Endpoint

    def __post_init__(self) -> None:
        # Endpoints are unordered; canonicalize so equality is structural.
        if self.b.key() < self.a.key():
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    def endpoints(self) -> tuple[Endpoint, Endpoint]:
        return (self.a, self.b)

    def key(self):
        return (self.a.key(), self.b.key())


@dataclass(frozen=True)
class Diagram:
    nodes: tuple[Node, ...]
    wires: tuple[Wire, ...]
    n_inputs: int
    n_outputs: int
    _by_id: dict = field(default=None, compare=False, repr=False)

    def node(self, node_id: NodeId) -> Node:
        return self._by_id[node_id]

    def has_node(self, node_id: NodeId) -> bool:
        return node_id in self._by_id

    @property
    def spiders(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.is_spider())

    def wires_between(self, u: NodeId, v: NodeId) -> list[int]:
        """Indices of wires joining u and v (u != v)."""
        out = []
        for i, w in enumerate(self.wires):
            ids = {ep.node for ep in w.endpoints() if isinstance(ep, NodePort)}
            if ids == {u, v}:
                out.append(i)
        return out

    def incident(self, node_id: NodeId) -> list[tuple[int, NodePort]]:
        """(wire index, endpoint) pairs touching the node, self-loops twice."""
        out = []
        for i, w in enumerate(self.wires):
            for ep in w.endpoints():
                if isinstance(ep, NodePort) and ep.node == node_id:
                    out.append((i, ep))
        return out


def build(
    nodes: Iterable[Node],
    wires: Iterable[Wire],
    inputs: int,
    outputs: int,
) -> Diagram:
    """Validate and assemble a diagram.

    ``inputs``/``outputs`` are the boundary port counts; slots are addressed
    by position 0..n-1.  Raises DuplicateId, DanglingWire or
    BoundarySlotConflict on malformed input.
    """
    node_list = sorted(nodes, key=lambda n: _id_key(n.id))
    by_id: dict[NodeId, Node] = {}
    for n in node_list:
        if n.id in by_id:
            raise DuplicateId(f"duplicate node id {n.id!r}")
        by_id[n.id] = n

    wire_list = sorted(wires, key=lambda w: w.key())
    port_use: dict[tuple[NodeId, int], int] = {}
    slot_use: dict[tuple[str, int], int] = {}
    for w in wire_list:
        ids = [ep.node for ep in w.endpoints() if isinstance(ep, NodePort)]
        if len(ids) == 2 and ids[0] == ids[1] and ids[0] in by_id:
            if not by_id[ids[0]].is_spider():
                raise DanglingWire(f"self-loop on non-spider node {ids[0]!r}")
        for ep in w.endpoints():
            if isinstance(ep, NodePort):
                if ep.node not in by_id:
                    raise DanglingWire(f"wire references missing node {ep.node!r}")
                node = by_id[ep.node]
                if not 0 <= ep.port < node.degree:
                    raise DanglingWire(
                        f"wire references port {ep.port} of node {ep.node!r} "
                        f"(degree {node.degree})"
                    )
                port_use[(ep.node, ep.port)] = port_use.get((ep.node, ep.port), 0) + 1
            else:
                n_slots = inputs if ep.side == IN else outputs
                if not 0 <= ep.pos < n_slots:
                    raise BoundarySlotConflict(
                        f"boundary slot {ep.side}[{ep.pos}] out of range"
                    )
                slot_use[(ep.side, ep.pos)] = slot_use.get((ep.side, ep.pos), 0) + 1

    for n in node_list:
        for p in range(n.degree):
            if port_use.get((n.id, p), 0) != 1:
                raise DanglingWire(
                    f"port {p} of node {n.id!r} used "
                    f"{port_use.get((n.id, p), 0)} times (want exactly 1)"
                )
    for side, count in ((IN, inputs), (OUT, outputs)):
        for pos in range(count):
            if slot_use.get((side, pos), 0) != 1:
                raise BoundarySlotConflict(
                    f"boundary slot {side}[{pos}] used "
                    f"{slot_use.get((side, pos), 0)} times (want exactly 1)"
                )

    d = Diagram(tuple(node_list), tuple(wire_list), inputs, outputs, by_id)
    return d


def connected_components(d: Diagram) -> list[tuple[frozenset[NodeId], tuple[int, ...]]]:
    """Partition into (node-id set, wire-index tuple) components.

    Boundary-only wires form singleton components with an empty node set;
    isolated nodes form components with no wires.  The partition is exhaustive
    and disjoint, and deterministic under node-id renaming only up to the
    renaming itself.
    """
    parent: dict[NodeId, NodeId] = {n.id: n.id for n in d.nodes}

    def find(x: NodeId) -> NodeId:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: NodeId, y: NodeId) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for w in d.wires:
        ids = [ep.node for ep in w.endpoints() if isinstance(ep, NodePort)]
        if len(ids) == 2:
            union(ids[0], ids[1])

    groups: dict[NodeId, list[NodeId]] = {}
    for n in d.nodes:
        groups.setdefault(find(n.id), []).append(n.id)

    comp_wires: dict[NodeId, list[int]] = {root: [] for root in groups}
    boundary_only: list[int] = []
    for i, w in enumerate(d.wires):
        ids = [ep.node for ep in w.endpoints() if isinstance(ep, NodePort)]
        if ids:
            comp_wires[find(ids[0])].append(i)
        else:
            boundary_only.append(i)

    comps = [
        (frozenset(members), tuple(comp_wires[root]))
        for root, members in groups.items()
    ]
    comps.extend((frozenset(), (i,)) for i in boundary_only)
    comps.sort(key=lambda c: min((_id_key(m) for m in c[0]), default=(2, "", c[1][0])))
    return comps


def monochrome_regions(d: Diagram) -> list[frozenset[NodeId]]:
    """Maximal sets of same-color spiders connected by direct wires.

    Two spiders share a region iff they are joined by a path of wires running
    entirely through spiders of that color; Hadamard nodes and opposite-color
    spiders break regions.
    """
    parent: dict[NodeId, NodeId] = {n.id: n.id for n in d.nodes if n.is_spider()}

    def find(x: NodeId) -> NodeId:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for w in d.wires:
        ids = [ep.node for ep in w.endpoints() if isinstance(ep, NodePort)]
        if len(ids) != 2 or ids[0] == ids[1]:
            continue
        u, v = d.node(ids[0]), d.node(ids[1])
        if u.is_spider() and v.is_spider() and u.kind == v.kind:
            ru, rv = find(u.id), find(v.id)
            if ru != rv:
                parent[rv] = ru

    groups: dict[NodeId, set[NodeId]] = {}
    for nid in parent:
        groups.setdefault(find(nid), set()).add(nid)
    regions = [frozenset(g) for g in groups.values()]
    regions.sort(key=lambda r: min(_id_key(m) for m in r))
    return regions


# --- serialization ---


def _endpoint_to_json(ep: Endpoint) -> dict:
    if isinstance(ep, NodePort):
        return {"node": ep.node, "port": ep.port}
    return {"boundary": ep.side, "pos": ep.pos}


def _endpoint_from_json(obj: dict) -> Endpoint:
    if "node" in obj:
        return NodePort(obj["node"], int(obj["port"]))
    if "boundary" in obj:
        side = obj["boundary"]
        if side not in (IN, OUT):
            raise ParseError(f"bad boundary side {side!r}")
        return BoundaryPort(side, int(obj["pos"]))
    raise ParseError(f"endpoint needs 'node' or 'boundary': {obj!r}")


def to_json_obj(d: Diagram) -> dict:
    nodes = []
    for n in d.nodes:
        entry: dict = {"id": n.id, "kind": n.kind, "ins": n.ins}
        if n.is_spider():
            entry.update(n.label.to_json())
        nodes.append(entry)
    return {
        "inputs": list(range(d.n_inputs)),
        "outputs": list(range(d.n_outputs)),
        "nodes": nodes,
        "wires": [
            [_endpoint_to_json(w.a), _endpoint_to_json(w.b)] for w in d.wires
        ],
    }


def serialize(d: Diagram) -> str:
    return json.dumps(to_json_obj(d), sort_keys=True, separators=(",", ":")) + "\n"


def from_json_obj(obj: dict) -> Diagram:
    try:
        nodes = []
        for i, entry in enumerate(obj["nodes"]):
            kind = entry["kind"]
            if kind not in NODE_KINDS:
                raise ParseError(f"nodes[{i}]: unknown kind {kind!r}")
            nid = entry["id"]
            if not isinstance(nid, (int, str)):
                raise ParseError(f"nodes[{i}]: id must be int or str")
            if kind == H:
                nodes.append(Node(nid, H, None, 1, 1))
                continue
            label = SpiderLabel(
                int(entry["a"]),
                RationalAngle.from_json(entry["alpha"]),
                RationalAngle.from_json(entry["k"]),
            )
            ins = int(entry["ins"])
            # Output arity is recovered from wire incidence below.
            nodes.append((nid, kind, label, ins))
        wires = [
            Wire(_endpoint_from_json(w[0]), _endpoint_from_json(w[1]))
            for w in obj["wires"]
        ]
        degree: dict = {}
        for w in wires:
            for ep in w.endpoints():
                if isinstance(ep, NodePort):
                    degree[ep.node] = max(degree.get(ep.node, 0), ep.port + 1)
        final_nodes = []
        for n in nodes:
            if isinstance(n, Node):
                final_nodes.append(n)
            else:
                nid, kind, label, ins = n
                deg = degree.get(nid, ins)
                final_nodes.append(Node(nid, kind, label, ins, max(deg - ins, 0)))
        return build(
            final_nodes,
            wires,
            len(obj["inputs"]),
            len(obj["outputs"]),
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed diagram object: {exc}") from exc


def deserialize(text: str) -> Diagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError("top-level diagram value must be an object")
    return from_json_obj(obj)
