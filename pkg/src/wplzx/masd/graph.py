"""Syndrome defect graphs with grid-order and winding annotations.

Each vertex carries (a_v, k_v): the local grid order and an integer winding
index.  The winding discrepancy between two vertices is measured on their
common refinement grid,

    delta_k(u, v) = lcm(a_u, a_v) * |k_u/a_u - k_v/a_v|,

computed exactly in rational arithmetic.  Virtual boundary vertices pair up
unmatched defects; they carry k = 0 and contribute zero winding difference by
construction.

Serialized form (JSON)::

    {"vertices": [{"id", "pos": [r, c], "a", "k", "virtual": bool}, ...],
     "edges": [{"u", "v", "d"}, ...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from ..errors import NegativeLambda, ParseError
from ..phase import check_grid_order, lcm_order

VertexId = Union[int, str]

RAW = "raw"
NORMALIZED = "normalized"
MODES = (RAW, NORMALIZED)


@dataclass(frozen=True)
class DefectVertex:
    id: VertexId
    position: tuple[float, float]
    a: int
    k: int
    is_virtual_boundary: bool = False

    def __post_init__(self) -> None:
        check_grid_order(self.a)
        if self.is_virtual_boundary and self.k != 0:
            raise ValueError("virtual boundary vertices must have k = 0")


@dataclass(frozen=True)
class DefectEdge:
    u: VertexId
    v: VertexId
    d: float

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise ValueError("defect edges must join distinct vertices")
        if not self.d >= 0.0:
            raise ValueError(f"edge distance must be >= 0, got {self.d}")


@dataclass(frozen=True)
class DefectGraph:
    """Vertices plus distance-weighted edges.

    ``complete`` means every pair of real (non-virtual) defects has an edge;
    virtual vertices follow the own-boundary pattern (one per real defect)
    in generated graphs but arbitrary layouts can be loaded from files.
    """

    vertices: tuple[DefectVertex, ...]
    edges: tuple[DefectEdge, ...]
    complete: bool = True
    _by_id: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        by_id = {}
        for v in self.vertices:
            if v.id in by_id:
                raise ValueError(f"duplicate vertex id {v.id!r}")
            by_id[v.id] = v
        for e in self.edges:
            if e.u not in by_id or e.v not in by_id:
                raise ValueError(f"edge ({e.u!r}, {e.v!r}) references missing vertex")
        object.__setattr__(self, "_by_id", by_id)

    def vertex(self, vid: VertexId) -> DefectVertex:
        return self._by_id[vid]

    @property
    def real_vertices(self) -> tuple[DefectVertex, ...]:
        return tuple(v for v in self.vertices if not v.is_virtual_boundary)

    @property
    def virtual_vertices(self) -> tuple[DefectVertex, ...]:
        return tuple(v for v in self.vertices if v.is_virtual_boundary)

    def to_json_obj(self) -> dict:
        return {
            "vertices": [
                {
                    "id": v.id,
                    "pos": list(v.position),
                    "a": v.a,
                    "k": v.k,
                    "virtual": v.is_virtual_boundary,
                }
                for v in self.vertices
            ],
            "edges": [{"u": e.u, "v": e.v, "d": e.d} for e in self.edges],
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json_obj(cls, obj: dict) -> DefectGraph:
        try:
            vertices = tuple(
                DefectVertex(
                    entry["id"],
                    (float(entry["pos"][0]), float(entry["pos"][1])),
                    int(entry["a"]),
                    int(entry["k"]),
                    bool(entry.get("virtual", False)),
                )
                for entry in obj["vertices"]
            )
            edges = tuple(
                DefectEdge(entry["u"], entry["v"], float(entry["d"]))
                for entry in obj["edges"]
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ParseError(f"malformed defect graph: {exc}") from exc
        return cls(vertices, edges, bool(obj.get("complete", True)))

    @classmethod
    def deserialize(cls, text: str) -> DefectGraph:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from exc
        return cls.from_json_obj(obj)


def winding_difference(u: DefectVertex, v: DefectVertex) -> Fraction:
    """Exact winding discrepancy on the lcm(a_u, a_v) refinement grid."""
    if u.is_virtual_boundary or v.is_virtual_boundary:
        return Fraction(0)
    L = lcm_order(u.a, v.a)
    return L * abs(Fraction(u.k, u.a) - Fraction(v.k, v.a))


def penalized_weight(
    d: float, delta_k: Fraction, L: int, lam: float, mode: str = NORMALIZED
) -> float:
    """d + lam * delta_k (raw) or d + lam * delta_k / L (normalized)."""
    if lam < 0.0:
        raise NegativeLambda(f"lambda must be >= 0, got {lam}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == RAW:
        return d + lam * float(delta_k)
    return d + lam * float(Fraction(delta_k, L))


def edge_weight(
    g: DefectGraph, e: DefectEdge, lam: float, mode: str = NORMALIZED
) -> float:
    """MASD cost of one edge; lam = 0 recovers the plain distance d."""
    u, v = g.vertex(e.u), g.vertex(e.v)
    dk = winding_difference(u, v)
    L = 1 if (u.is_virtual_boundary or v.is_virtual_boundary) else lcm_order(u.a, v.a)
    return penalized_weight(e.d, dk, L, lam, mode)


def edge_weights(g: DefectGraph, lam: float, mode: str = NORMALIZED) -> dict:
    """Weight table keyed by frozenset({u, v}) for all edges of g."""
    return {frozenset((e.u, e.v)): edge_weight(g, e, lam, mode) for e in g.edges}
