"""Diagram rewriting: fusion, identity removal, color change, normalization.

The normalizer collapses every maximal *same-color* region to a single spider
carrying the canonical label (L, theta, 0), where L is the LCM of the region's
grid orders and theta the sum of total angles mod one turn.  Collapsing whole
mixed-color components would not be semantics-preserving, so regions are the
fusion scope.

Fusion lifts labels to the common refinement grid with index arithmetic that
preserves angle values exactly: the fused base phase is alpha_u + alpha_v and
the fused winding is (L/a_u) k_u + (L/a_v) k_v, which together reproduce
theta_u + theta_v.  Every rewrite is recorded in a replayable trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import diagram as dg
from .diagram import Diagram, Node, NodePort, Wire, build
from .errors import (
    ColorMismatch,
    NotConnected,
    NotIdentity,
    TraceReplayError,
)
from .phase import (
    GRID_ORDER_CAP,
    RationalAngle,
    SpiderLabel,
    TotalAngle,
    lcm_order,
    total_angle,
)

POTENTIAL_EPS = 1e-6


@dataclass(frozen=True)
class CanonicalLabel:
    """Per-region normal form: global LCM weight and aggregated total angle.

    ``on_grid`` records whether theta actually lies on the order-L grid (raw
    continuous inputs may be off-grid); ``winding_sum`` is the lifted winding
    accumulated before it was absorbed into the total angle, kept as a
    side-channel for winding-aware consumers.
    """

    L: int
    theta: TotalAngle
    in_arity: int
    out_arity: int
    on_grid: bool
    winding_sum: RationalAngle

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "theta": self.theta.turns.to_json(),
            "in_arity": self.in_arity,
            "out_arity": self.out_arity,
            "on_grid": self.on_grid,
            "winding_sum": self.winding_sum.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> CanonicalLabel:
        return cls(
            int(obj["L"]),
            TotalAngle(RationalAngle.from_json(obj["theta"])),
            int(obj["in_arity"]),
            int(obj["out_arity"]),
            bool(obj["on_grid"]),
            RationalAngle.from_json(obj["winding_sum"]),
        )


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    consumed: tuple
    produced: tuple
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "consumed": list(self.consumed),
            "produced": list(self.produced),
            "detail": self.detail,
        }

    @classmethod
    def from_json(cls, obj: dict) -> TraceEntry:
        return cls(
            str(obj["rule"]),
            tuple(obj["consumed"]),
            tuple(obj["produced"]),
            dict(obj.get("detail", {})),
        )


@dataclass
class RewriteTrace:
    """Ordered record of rule applications; replayable and JSONL-serializable."""

    entries: list[TraceEntry] = field(default_factory=list)

    def append(self, entry: TraceEntry) -> None:
        self.entries.append(entry)

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(e.to_json(), sort_keys=True, separators=(",", ":")) + "\n"
            for e in self.entries
        )

    @classmethod
    def from_jsonl(cls, text: str) -> RewriteTrace:
        entries = []
        for line in text.splitlines():
            line = line.strip()
            if line:
                entries.append(TraceEntry.from_json(json.loads(line)))
        return cls(entries)

    def __len__(self) -> int:
        return len(self.entries)


def node_total_angle(node: Node) -> TotalAngle:
    return total_angle(node.label)


def fusion_consistent(u: SpiderLabel, v: SpiderLabel) -> bool:
    """Holonomy-compatibility predicate alpha_u/a_u = alpha_v/a_v mod 1/lcm.

    Advisory only: exact lifting makes every fusion well-defined, and almost
    all valid fusions fail this test (any two distinct textbook phases do),
    so it is exposed for diagnostics rather than enforced by fuse_pair.
    """
    L = lcm_order(u.grid, v.grid)
    lhs = u.alpha.fraction / u.grid
    rhs = v.alpha.fraction / v.grid
    return (lhs - rhs) % Fraction(1, L) == 0


def fuse_pair(d: Diagram, u, v, cap: int = GRID_ORDER_CAP) -> Diagram:
    """Fuse two connected same-color spiders into one on the LCM grid.

    All c connecting wires are removed (total arity drops by 2c); surviving
    legs re-attach to the merged spider, which keeps u's id.
    """
    d_new, _ = _fuse_pair_impl(d, u, v, cap)
    return d_new


def _fuse_pair_impl(d: Diagram, u, v, cap: int) -> tuple[Diagram, Node]:
    if u == v or not (d.has_node(u) and d.has_node(v)):
        raise NotConnected(f"cannot fuse {u!r} with {v!r}")
    nu, nv = d.node(u), d.node(v)
    if not (nu.is_spider() and nv.is_spider()):
        raise ColorMismatch("fusion applies to spiders only")
    if nu.kind != nv.kind:
        raise ColorMismatch(f"color mismatch: {nu.kind} vs {nv.kind}")
    connecting = set(d.wires_between(u, v))
    if not connecting:
        raise NotConnected(f"{u!r} and {v!r} share no wire")

    L = lcm_order(nu.label.grid, nv.label.grid, cap=cap)
    alpha = (nu.label.alpha + nv.label.alpha).mod1()
    ku = nu.label.winding.fraction * (L // nu.label.grid)
    kv = nv.label.winding.fraction * (L // nv.label.grid)
    label = SpiderLabel(L, alpha, RationalAngle.from_fraction(ku + kv))

    # Ports consumed by connecting wires disappear; survivors are renumbered
    # input-side first (u's ports before v's on each side).
    consumed: set[tuple] = set()
    for i in connecting:
        for ep in d.wires[i].endpoints():
            consumed.add((ep.node, ep.port))
    survivors_in, survivors_out = [], []
    for node in (nu, nv):
        for p in range(node.degree):
            if (node.id, p) in consumed:
                continue
            (survivors_in if node.port_side(p) == dg.IN else survivors_out).append(
                (node.id, p)
            )
    port_map = {old: i for i, old in enumerate(survivors_in + survivors_out)}
    merged = Node(u, nu.kind, label, len(survivors_in), len(survivors_out))

    def remap(ep):
        if isinstance(ep, NodePort) and ep.node in (u, v):
            return NodePort(u, port_map[(ep.node, ep.port)])
        return ep

    wires = [
        Wire(remap(w.a), remap(w.b))
        for i, w in enumerate(d.wires)
        if i not in connecting
    ]
    nodes = [n for n in d.nodes if n.id not in (u, v)] + [merged]
    return build(nodes, wires, d.n_inputs, d.n_outputs), merged


def identity_removal(d: Diagram, node_id) -> Diagram:
    """Delete a total-angle-zero spider with one input and one output leg."""
    if not d.has_node(node_id):
        raise NotIdentity(f"no node {node_id!r}")
    node = d.node(node_id)
    if not node.is_spider():
        raise NotIdentity("identity removal applies to spiders")
    if (node.ins, node.outs) != (1, 1):
        raise NotIdentity("identity spider needs one input leg and one output leg")
    if not node_total_angle(node).is_zero():
        raise NotIdentity(f"spider {node_id!r} has nonzero total angle")

    touching = [i for i, _ in d.incident(node_id)]
    if len(set(touching)) == 1:
        # A self-loop: removing it would leave a free-floating circle scalar,
        # which the wire model cannot represent.
        raise NotIdentity("cannot splice a self-loop")
    wa, wb = (d.wires[i] for i in sorted(set(touching)))

    def far_end(w: Wire):
        ends = [
            ep
            for ep in w.endpoints()
            if not (isinstance(ep, NodePort) and ep.node == node_id)
        ]
        return ends[0]

    spliced = Wire(far_end(wa), far_end(wb))
    wires = [w for i, w in enumerate(d.wires) if i not in set(touching)]
    wires.append(spliced)
    nodes = [n for n in d.nodes if n.id != node_id]
    return build(nodes, wires, d.n_inputs, d.n_outputs)


def _fresh_ids(d: Diagram, prefix: str, count: int) -> list[str]:
    taken = {n.id for n in d.nodes}
    out, i = [], 0
    while len(out) < count:
        cand = f"{prefix}{i}"
        if cand not in taken:
            out.append(cand)
            taken.add(cand)
        i += 1
    return out


def color_change(d: Diagram, node_id, negate: bool = False) -> Diagram:
    """Flip a spider's color, inserting a Hadamard node on every leg.

    The label (a, alpha, k) is preserved, which is the matrix-sound variant
    of the rule; ``negate=True`` switches to the sign-flipping variant
    (alpha, k) -> (-alpha, -k), which is *not* semantics-preserving and is
    excluded from soundness checks.
    """
    node = d.node(node_id)
    if not node.is_spider():
        raise ColorMismatch("color change applies to spiders")
    lab = node.label
    if negate:
        lab = SpiderLabel(lab.grid, (-lab.alpha).mod1(), -lab.winding)
    flipped = Node(
        node_id, dg.X if node.kind == dg.Z else dg.Z, lab, node.ins, node.outs
    )

    legs = [(i, ep) for i, ep in d.incident(node_id)]
    h_ids = _fresh_ids(d, "h", len(legs))
    h_for_leg = {}
    for (wi, ep), hid in zip(legs, h_ids):
        h_for_leg[(wi, ep.port)] = hid

    new_wires: list[Wire] = []
    extra_nodes: list[Node] = [flipped]
    for i, w in enumerate(d.wires):
        a, b = w.endpoints()

        def reroute(ep, wire_index=i):
            if isinstance(ep, NodePort) and ep.node == node_id:
                hid = h_for_leg[(wire_index, ep.port)]
                return NodePort(hid, 0)
            return ep

        new_wires.append(Wire(reroute(a), reroute(b)))
    for (wi, ep), hid in zip(legs, h_ids):
        extra_nodes.append(Node(hid, dg.H, None, 1, 1))
        new_wires.append(Wire(NodePort(hid, 1), NodePort(node_id, ep.port)))

    nodes = [n for n in d.nodes if n.id != node_id] + extra_nodes
    return build(nodes, new_wires, d.n_inputs, d.n_outputs)


def canonical_label(
    labels,
    in_arity: int = 0,
    out_arity: int = 0,
    cap: int = GRID_ORDER_CAP,
) -> CanonicalLabel:
    """Label-level normal form of a non-empty same-color region.

    L is the LCM of all grid orders and theta the exact sum of total angles
    mod one turn; both are independent of enumeration order.
    """
    labels = list(labels)
    if not labels:
        raise ValueError("canonical_label needs at least one spider label")
    L = 1
    for lab in labels:
        L = lcm_order(L, lab.grid, cap=cap)
    theta = Fraction(0)
    wind = Fraction(0)
    for lab in labels:
        theta += total_angle(lab).turns.fraction
        wind += lab.winding.fraction * (L // lab.grid)
    turns = RationalAngle.from_fraction(theta % 1)
    return CanonicalLabel(
        L=L,
        theta=TotalAngle(turns),
        in_arity=in_arity,
        out_arity=out_arity,
        on_grid=turns.is_grid_compliant(L),
        winding_sum=RationalAngle.from_fraction(wind),
    )


def _canonical_form_of_node(node: Node) -> SpiderLabel:
    theta = node_total_angle(node)
    return SpiderLabel(node.label.grid, theta.turns, RationalAngle(0))


def _replace_label(d: Diagram, node_id, label: SpiderLabel) -> Diagram:
    old = d.node(node_id)
    replacement = Node(node_id, old.kind, label, old.ins, old.outs)
    nodes = [replacement if n.id == node_id else n for n in d.nodes]
    return build(nodes, d.wires, d.n_inputs, d.n_outputs)


def wzcc_normalize(
    d: Diagram, cap: int = GRID_ORDER_CAP
) -> tuple[Diagram, list[CanonicalLabel], RewriteTrace]:
    """Collapse every maximal monochrome region to one canonical spider.

    Returns the normalized diagram, one CanonicalLabel per region (ordered by
    the smallest node id in the region) and the replayable trace.  Hadamard
    nodes and wiring between regions are untouched; the result is idempotent
    under repeated normalization.
    """
    trace = RewriteTrace()
    cur = d
    labels: list[CanonicalLabel] = []
    for region in dg.monochrome_regions(d):
        remaining = sorted(region, key=dg._id_key)
        region_set = set(remaining)
        region_labels = [d.node(r).label for r in remaining]
        while len(remaining) > 1:
            # one wire scan finds the smallest connected in-region pair
            pair = None
            for w in cur.wires:
                ids = [ep.node for ep in w.endpoints() if isinstance(ep, NodePort)]
                if len(ids) != 2 or ids[0] == ids[1]:
                    continue
                if ids[0] in region_set and ids[1] in region_set:
                    cand = tuple(sorted(ids, key=dg._id_key))
                    if pair is None or (dg._id_key(cand[0]), dg._id_key(cand[1])) < (
                        dg._id_key(pair[0]),
                        dg._id_key(pair[1]),
                    ):
                        pair = cand
            if pair is None:  # pragma: no cover - regions are connected
                raise NotConnected(f"region {sorted(region)!r} is not connected")
            u, v = pair
            cur, _ = _fuse_pair_impl(cur, u, v, cap)
            trace.append(TraceEntry("fuse", (u, v), (u,)))
            remaining.remove(v)
            region_set.discard(v)
        rep = remaining[0]
        node = cur.node(rep)
        canon = _canonical_form_of_node(node)
        if canon != node.label:
            cur = _replace_label(cur, rep, canon)
            trace.append(
                TraceEntry(
                    "normalize-label", (rep,), (rep,), {"label": canon.to_json()}
                )
            )
        labels.append(
            canonical_label(region_labels, node.ins, node.outs, cap=cap)
        )
    return cur, labels, trace


def apply_trace(d: Diagram, trace: RewriteTrace, cap: int = GRID_ORDER_CAP) -> Diagram:
    """Replay a trace on a diagram, reproducing the recorded rewrite."""
    cur = d
    for entry in trace.entries:
        try:
            if entry.rule == "fuse":
                u, v = entry.consumed
                cur = fuse_pair(cur, u, v, cap=cap)
            elif entry.rule == "normalize-label":
                (nid,) = entry.consumed
                cur = _replace_label(cur, nid, SpiderLabel.from_json(entry.detail["label"]))
            elif entry.rule == "identity-removal":
                (nid,) = entry.consumed
                cur = identity_removal(cur, nid)
            elif entry.rule == "color-change":
                (nid,) = entry.consumed
                cur = color_change(cur, nid)
            else:
                raise TraceReplayError(f"unknown rule {entry.rule!r}")
        except TraceReplayError:
            raise
        except Exception as exc:
            raise TraceReplayError(f"trace entry {entry} failed: {exc}") from exc
    return cur


def potential(d: Diagram, eps: float = POTENTIAL_EPS) -> float:
    """Termination potential: curvature mismatch over adjacent same-color
    pairs plus eps per spider.  Strictly decreases under accepted fusions."""
    pairs = set()
    for w in d.wires:
        ids = [ep.node for ep in w.endpoints() if isinstance(ep, NodePort)]
        if len(ids) != 2 or ids[0] == ids[1]:
            continue
        a, b = d.node(ids[0]), d.node(ids[1])
        if a.is_spider() and b.is_spider() and a.kind == b.kind:
            pairs.add(frozenset((a.id, b.id)))
    total = 0.0
    for pair in pairs:
        u, v = tuple(pair)
        au, av = d.node(u).label.grid, d.node(v).label.grid
        total += abs(2.0 / au**2 - 2.0 / av**2)
    return total + eps * len(d.spiders)


def curvature_guided_normalize(
    d: Diagram, cap: int = GRID_ORDER_CAP, eps: float = POTENTIAL_EPS
) -> Diagram:
    """Greedy fusion loop accepting only potential-decreasing steps.

    Candidates are scanned in ascending (id, id) order for reproducibility;
    the fixpoint has no potential-decreasing fusion left.
    """
    cur = d
    phi = potential(cur, eps)
    while True:
        candidates = set()
        for w in cur.wires:
            ids = [ep.node for ep in w.endpoints() if isinstance(ep, NodePort)]
            if len(ids) != 2 or ids[0] == ids[1]:
                continue
            a, b = cur.node(ids[0]), cur.node(ids[1])
            if a.is_spider() and b.is_spider() and a.kind == b.kind:
                candidates.add(tuple(sorted((a.id, b.id), key=dg._id_key)))
        progressed = False
        for u, v in sorted(candidates, key=lambda p: (dg._id_key(p[0]), dg._id_key(p[1]))):
            trial = fuse_pair(cur, u, v, cap=cap)
            phi_trial = potential(trial, eps)
            if phi_trial < phi:
                cur, phi = trial, phi_trial
                progressed = True
                break
        if not progressed:
            return cur
