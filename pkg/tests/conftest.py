"""Shared fixtures and independent oracles.

The oracles here (dense gate matrices, brute-force matching enumeration,
BFS component search) are deliberately written from scratch so they share no
code path with the implementations they check.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from wplzx import diagram as dg
from wplzx.diagram import BoundaryPort, Node, NodePort, Wire, build
from wplzx.phase import RationalAngle, SpiderLabel

# --- diagram builders ---


def spider(nid, kind, a=1, alpha=(0, 1), k=(0, 1), ins=1, outs=1) -> Node:
    return Node(
        nid, kind, SpiderLabel(a, RationalAngle(*alpha), RationalAngle(*k)), ins, outs
    )


def chain(*nodes: Node) -> dg.Diagram:
    """Single-wire chain: in -> n0 -> n1 -> ... -> out (all nodes 1-1)."""
    wires = [Wire(BoundaryPort(dg.IN, 0), NodePort(nodes[0].id, 0))]
    for a, b in zip(nodes, nodes[1:]):
        wires.append(Wire(NodePort(a.id, 1), NodePort(b.id, 0)))
    wires.append(Wire(NodePort(nodes[-1].id, 1), BoundaryPort(dg.OUT, 0)))
    return build(list(nodes), wires, 1, 1)


def clique_region(labels, kind=dg.Z) -> dg.Diagram:
    """All-to-all connected same-color region, one dangling leg per spider.

    Spider i gets ins = i direct wires to earlier spiders... arranged so the
    diagram validates: spider i has (i) input ports wired to each earlier
    spider, plus (n-1-i) output ports to later spiders, plus one boundary leg.
    """
    n = len(labels)
    nodes = []
    wires = []
    for i, lab in enumerate(labels):
        ins = i
        outs = (n - 1 - i) + 1  # later peers + one boundary leg
        nodes.append(Node(i, kind, lab, ins, outs))
    for i in range(n):
        for j in range(i + 1, n):
            # output port of i for peer j: ports are [0..i) inputs, then outputs
            port_i = i + (j - i - 1)
            port_j = i  # input port of j for peer i
            wires.append(Wire(NodePort(i, port_i), NodePort(j, port_j)))
    for i in range(n):
        wires.append(Wire(NodePort(i, i + (n - 1 - i)), BoundaryPort(dg.OUT, i)))
    return build(nodes, wires, 0, n)


def path_region(labels, kind=dg.Z) -> dg.Diagram:
    nodes = [Node(i, kind, lab, 1, 1) for i, lab in enumerate(labels)]
    return chain(*nodes)


# --- independent circuit-unitary oracle ---

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _rot(pauli: np.ndarray, theta: float) -> np.ndarray:
    return math.cos(theta / 2) * _I2 - 1j * math.sin(theta / 2) * pauli


def _embed(ops: dict, n: int) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for q in range(n):
        m = np.kron(m, ops.get(q, _I2))
    return m


def circuit_unitary(c) -> np.ndarray:
    """Textbook matrix of a circuit (qubit 0 = most significant)."""
    n = c.n_qubits
    u = np.eye(2**n, dtype=complex)
    for g in c.gates:
        if g.name == "CX":
            ctrl, tgt = g.qubits
            p0 = np.array([[1, 0], [0, 0]], dtype=complex)
            p1 = np.array([[0, 0], [0, 1]], dtype=complex)
            m = _embed({ctrl: p0}, n) + _embed({ctrl: p1, tgt: _X}, n)
        elif g.name == "H":
            m = _embed({g.qubits[0]: _H}, n)
        elif g.name == "RZ":
            m = _embed({g.qubits[0]: _rot(_Z, g.angle_radians())}, n)
        elif g.name == "RX":
            m = _embed({g.qubits[0]: _rot(_X, g.angle_radians())}, n)
        elif g.name == "RY":
            m = _embed({g.qubits[0]: _rot(_Y, g.angle_radians())}, n)
        else:
            raise AssertionError(f"oracle cannot handle {g.name}")
        u = m @ u
    return u


# --- brute-force matching oracle ---


def all_perfect_matchings(ids):
    """Yield every perfect matching of the id list (double-factorial many)."""
    ids = list(ids)
    if not ids:
        yield []
        return
    first = ids[0]
    for j in range(1, len(ids)):
        rest = ids[1:j] + ids[j + 1 :]
        for sub in all_perfect_matchings(rest):
            yield [(first, ids[j])] + sub


def brute_force_min_matching(ids, weight):
    best, best_cost = None, math.inf
    for m in all_perfect_matchings(ids):
        cost = sum(weight(u, v) for u, v in m)
        if cost < best_cost:
            best, best_cost = m, cost
    return best, best_cost


# --- BFS component oracle (independent of the union-find implementation) ---


def bfs_components(d: dg.Diagram):
    """Node-id partition by wire connectivity, found by plain BFS."""
    adj: dict = {n.id: set() for n in d.nodes}
    for w in d.wires:
        ids = [ep.node for ep in w.endpoints() if isinstance(ep, NodePort)]
        if len(ids) == 2:
            adj[ids[0]].add(ids[1])
            adj[ids[1]].add(ids[0])
    seen = set()
    comps = []
    for start in adj:
        if start in seen:
            continue
        comp = set()
        stack = [start]
        while stack:
            cur = stack.pop()
            if cur in comp:
                continue
            comp.add(cur)
            stack.extend(adj[cur] - comp)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def bfs_color_regions(d: dg.Diagram):
    """Same-color spider regions by BFS restricted to same-color wires."""
    spiders = {n.id: n for n in d.nodes if n.is_spider()}
    adj: dict = {nid: set() for nid in spiders}
    for w in d.wires:
        ids = [ep.node for ep in w.endpoints() if isinstance(ep, NodePort)]
        if len(ids) != 2 or ids[0] == ids[1]:
            continue
        a, b = ids
        if a in spiders and b in spiders and spiders[a].kind == spiders[b].kind:
            adj[a].add(b)
            adj[b].add(a)
    seen = set()
    out = []
    for start in adj:
        if start in seen:
            continue
        comp = set()
        stack = [start]
        while stack:
            cur = stack.pop()
            if cur in comp:
                continue
            comp.add(cur)
            stack.extend(adj[cur] - comp)
        seen |= comp
        out.append(frozenset(comp))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_small_diagram(seed: int, max_spiders: int = 14, max_qubits: int = 5):
    """Seeded small diagram within the oracle's evaluation budget."""
    from wplzx.datasets import GenConfig, gen_random_wplzx

    r = np.random.default_rng(seed)
    q = int(r.integers(1, max_qubits + 1))
    lo = int(r.integers(2, max(3, max_spiders // 2)))
    hi = int(r.integers(lo, max_spiders + 1))
    cfg = GenConfig(
        seed=seed,
        spiders_min=lo,
        spiders_max=hi,
        grid_orders=(1, 2, 3, 4, 6, 8),
        density=float(r.uniform(0.2, 1.0)),
        qubits=q,
        layers=1,
    )
    return gen_random_wplzx(cfg)
