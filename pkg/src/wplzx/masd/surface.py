"""Rotated surface-code Monte-Carlo harness for the winding-aware decoder.

The code places d*d data qubits on a grid with checkerboard plaquettes:
weight-2 X checks close the top and bottom edges, weight-2 Z checks the left
and right edges.  The harness samples iid bit-flip errors on data qubits,
decodes the violated Z checks (the symmetric phase-flip sector behaves
identically with roles swapped), applies the matched correction chains and
declares logical failure when the composite error crosses the lattice an odd
number of times (anticommutes with the logical Z row).

Defect-pair distances are exact minimum error-chain lengths obtained by BFS
over the qubit adjacency of the checks; in the bulk these coincide with
Manhattan distances in the rotated frame.  Every defect gets one virtual
boundary partner (k = 0) at its nearest boundary so odd defect sets always
match, and virtual-virtual pairs are free.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import ConfigInvalid, InvalidDistance
from ..rng import trial_generator
from .decode import masd_decode
from .graph import NORMALIZED, DefectEdge, DefectGraph, DefectVertex
from .matching import Matching

SUPPORTED_DISTANCES = (3, 5, 7)

UNIFORM = "uniform"
TWO_SECTOR = "two-sector"
CONSTANT = "constant"


@dataclass(frozen=True)
class WindingModel:
    """How sampled defects acquire (a_v, k_v) labels.

    two-sector: constant grid order, one winding value per lattice half, so
    cross-sector matches pay the winding penalty.  uniform: k_v drawn from
    {0..a-1}.  constant: one (a, k) everywhere.
    """

    kind: str = TWO_SECTOR
    a: int = 8
    k_left: int = 0
    k_right: int = 1
    k_const: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (UNIFORM, TWO_SECTOR, CONSTANT):
            raise ConfigInvalid(f"unknown winding model {self.kind!r}")
        if self.a < 1:
            raise ConfigInvalid("winding model grid order must be >= 1")

    def assign(self, position: tuple[float, float], midline: float, rng) -> tuple[int, int]:
        if self.kind == UNIFORM:
            return self.a, int(rng.integers(0, self.a))
        if self.kind == TWO_SECTOR:
            return self.a, self.k_left if position[1] < midline else self.k_right
        return self.a, self.k_const


@dataclass(frozen=True)
class Plaquette:
    index: int
    center: tuple[float, float]
    qubits: frozenset[int]


@dataclass(frozen=True)
class RotatedSurfaceCode:
    """Stabilizer layout of the distance-d rotated surface code."""

    distance: int
    z_checks: tuple[Plaquette, ...]
    x_checks: tuple[Plaquette, ...]
    logical_z_row: frozenset[int]
    logical_x_col: frozenset[int]
    # BFS tables for the decoded (Z-check) sector:
    pair_distance: dict = field(compare=False, repr=False, default=None)
    pair_path: dict = field(compare=False, repr=False, default=None)
    boundary_distance: dict = field(compare=False, repr=False, default=None)
    boundary_path: dict = field(compare=False, repr=False, default=None)

    @property
    def n_data(self) -> int:
        return self.distance * self.distance

    def qubit_index(self, r: int, c: int) -> int:
        return r * self.distance + c

    def z_syndrome(self, x_errors: np.ndarray) -> tuple[int, ...]:
        """Indices of Z checks with odd overlap with the error support."""
        flipped = {int(q) for q in np.flatnonzero(x_errors)}
        return tuple(
            p.index for p in self.z_checks if len(p.qubits & flipped) % 2 == 1
        )


def build_code(distance: int) -> RotatedSurfaceCode:
    if distance not in SUPPORTED_DISTANCES:
        raise InvalidDistance(
            f"distance must be one of {SUPPORTED_DISTANCES}, got {distance}"
        )
    d = distance

    def qubits_of(i: int, j: int) -> frozenset[int]:
        out = []
        for r, c in ((i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1)):
            if 0 <= r < d and 0 <= c < d:
                out.append(r * d + c)
        return frozenset(out)

    z_list: list[Plaquette] = []
    x_list: list[Plaquette] = []
    for i in range(-1, d):
        for j in range(-1, d):
            qs = qubits_of(i, j)
            if len(qs) not in (2, 4):
                continue
            is_z = (i + j) % 2 == 0
            if len(qs) == 2:
                on_top_bottom = i in (-1, d - 1)
                if is_z and on_top_bottom:
                    continue  # Z checks close only the left/right edges
                if not is_z and not on_top_bottom:
                    continue  # X checks close only the top/bottom edges
            center = (i + 0.5, j + 0.5)
            target = z_list if is_z else x_list
            target.append(Plaquette(len(target), center, qs))

    assert len(z_list) + len(x_list) == d * d - 1
    row0 = frozenset(range(d))
    col0 = frozenset(r * d for r in range(d))
    for p in x_list:  # logical Z commutes with every X check
        assert len(p.qubits & row0) % 2 == 0
    for p in z_list:  # logical X commutes with every Z check
        assert len(p.qubits & col0) % 2 == 0

    pair_dist, pair_path, b_dist, b_path = _bfs_tables(z_list, d)
    return RotatedSurfaceCode(
        distance=d,
        z_checks=tuple(z_list),
        x_checks=tuple(x_list),
        logical_z_row=row0,
        logical_x_col=col0,
        pair_distance=pair_dist,
        pair_path=pair_path,
        boundary_distance=b_dist,
        boundary_path=b_path,
    )


def _bfs_tables(z_list: Sequence[Plaquette], d: int):
    """Exact chain-length metric over the Z-check adjacency.

    Nodes are Z checks plus a shared boundary sink; each data qubit links the
    checks containing it (or a check to the boundary when it sits in exactly
    one).  BFS yields minimum error counts and an explicit witness chain.
    """
    containing: dict[int, list[int]] = {}
    for p in z_list:
        for q in p.qubits:
            containing.setdefault(q, []).append(p.index)
    adjacency: dict[int, list[tuple[int, int]]] = {p.index: [] for p in z_list}
    for q in range(d * d):
        owners = containing.get(q, [])
        assert 1 <= len(owners) <= 2, f"qubit {q} sits in {len(owners)} Z checks"
        if len(owners) == 2:
            a, b = owners
            adjacency[a].append((b, q))
            adjacency[b].append((a, q))
        else:
            adjacency[owners[0]].append((-1, q))
    for lst in adjacency.values():
        lst.sort()

    pair_dist: dict[tuple[int, int], int] = {}
    pair_path: dict[tuple[int, int], tuple[int, ...]] = {}
    b_dist: dict[int, int] = {}
    b_path: dict[int, tuple[int, ...]] = {}
    for src in adjacency:
        dist = {src: 0}
        via: dict[int, tuple[int, int]] = {}
        bdist = None
        bvia = None
        queue = deque([src])
        while queue:
            cur = queue.popleft()
            for nxt, q in adjacency[cur]:
                if nxt == -1:
                    if bdist is None:
                        bdist = dist[cur] + 1
                        bvia = (cur, q)
                    continue
                if nxt not in dist:
                    dist[nxt] = dist[cur] + 1
                    via[nxt] = (cur, q)
                    queue.append(nxt)

        def chain(dst: int) -> tuple[int, ...]:
            out = []
            node = dst
            while node != src:
                prev, q = via[node]
                out.append(q)
                node = prev
            return tuple(reversed(out))

        for dst in dist:
            if dst == src:
                continue
            pair_dist[(src, dst)] = dist[dst]
            pair_path[(src, dst)] = chain(dst)
        assert bdist is not None
        prev, q = bvia
        b_dist[src] = bdist
        b_path[src] = chain(prev) + (q,)
    return pair_dist, pair_path, b_dist, b_path


@dataclass(frozen=True)
class SurfaceSample:
    """One Monte-Carlo draw: the true error and its syndrome graph."""

    distance: int
    p_phys: float
    seed: int
    trial: int
    x_errors: tuple[int, ...]
    syndrome: tuple[int, ...]


def defect_graph_for(
    code: RotatedSurfaceCode,
    syndrome: Iterable[int],
    winding: WindingModel,
    rng,
) -> DefectGraph:
    midline = (code.distance - 1) / 2.0
    vertices: list[DefectVertex] = []
    edges: list[DefectEdge] = []
    syndrome = sorted(syndrome)
    for idx in syndrome:
        center = code.z_checks[idx].center
        a, k = winding.assign(center, midline, rng)
        vertices.append(DefectVertex(idx, center, a, k, is_virtual_boundary=False))
        vertices.append(
            DefectVertex(f"b{idx}", center, 1, 0, is_virtual_boundary=True)
        )
    for i, u in enumerate(syndrome):
        for v in syndrome[i + 1 :]:
            edges.append(DefectEdge(u, v, float(code.pair_distance[(u, v)])))
        edges.append(DefectEdge(u, f"b{u}", float(code.boundary_distance[u])))
    for i, u in enumerate(syndrome):
        for v in syndrome[i + 1 :]:
            edges.append(DefectEdge(f"b{u}", f"b{v}", 0.0))
    return DefectGraph(tuple(vertices), tuple(edges), complete=True)


def sample_surface_code(
    distance: int,
    p_phys: float,
    seed: int,
    trial: int = 0,
    winding: WindingModel = WindingModel(),
    code: RotatedSurfaceCode | None = None,
) -> tuple[SurfaceSample, DefectGraph]:
    """Draw iid data-qubit errors at rate p_phys and build the defect graph.

    Deterministic per (seed, trial) via counter-mode seed splitting.
    """
    if not 0.0 <= p_phys < 0.5:
        raise ConfigInvalid(f"p_phys must lie in [0, 0.5), got {p_phys}")
    if code is None:
        code = build_code(distance)
    rng = trial_generator(seed, trial)
    errs = rng.random(code.n_data) < p_phys
    syndrome = code.z_syndrome(errs)
    graph = defect_graph_for(code, syndrome, winding, rng)
    sample = SurfaceSample(
        distance=distance,
        p_phys=p_phys,
        seed=seed,
        trial=trial,
        x_errors=tuple(int(q) for q in np.flatnonzero(errs)),
        syndrome=syndrome,
    )
    return sample, graph


def correction_from_matching(code: RotatedSurfaceCode, matching: Matching) -> set[int]:
    """Error chain realizing the matched pairing (XOR of witness paths)."""
    correction: set[int] = set()
    for u, v in matching.pairs:
        u_virtual = isinstance(u, str)
        v_virtual = isinstance(v, str)
        if u_virtual and v_virtual:
            continue
        if u_virtual or v_virtual:
            real = v if u_virtual else u
            path = code.boundary_path[real]
        else:
            path = code.pair_path[(u, v)]
        correction ^= set(path)
    return correction


def logical_failure(
    code: RotatedSurfaceCode, sample: SurfaceSample, matching: Matching
) -> bool:
    """True when error + correction flips the logical operator.

    The composite is syndrome-free by construction; failure is odd overlap
    with the logical Z row (an odd number of lattice crossings).
    """
    composite = set(sample.x_errors) ^ correction_from_matching(code, matching)
    flipped = np.zeros(code.n_data, dtype=bool)
    for q in composite:
        flipped[q] = True
    assert not code.z_syndrome(flipped), "correction left residual syndrome"
    return len(composite & code.logical_z_row) % 2 == 1


def lambda_sweep(
    instances: Sequence[tuple[SurfaceSample, DefectGraph]],
    lambdas: Sequence[float],
    mode: str = NORMALIZED,
    beta: float = 1.0,
    code: RotatedSurfaceCode | None = None,
) -> list[dict]:
    """Decode every instance at each lambda; one aggregate row per lambda.

    Rows carry the logical error rate and mean DRG/cost statistics; results
    are deterministic given the instances.
    """
    if not instances or not list(lambdas):
        raise ConfigInvalid("lambda_sweep needs instances and a lambda grid")
    codes: dict[int, RotatedSurfaceCode] = {}
    if code is not None:
        codes[code.distance] = code
    rows = []
    for lam in lambdas:
        failures = 0
        toys, pms, costs = [], [], []
        for sample, graph in instances:
            c = codes.get(sample.distance)
            if c is None:
                c = build_code(sample.distance)
                codes[sample.distance] = c
            matching, report = masd_decode(graph, lam, mode=mode, beta=beta)
            if logical_failure(c, sample, matching):
                failures += 1
            toys.append(report.drg_toy)
            pms.append(report.drg_pm)
            costs.append(report.total_cost)
        rows.append(
            {
                "lambda": lam,
                "p_phys": instances[0][0].p_phys,
                "distance": instances[0][0].distance,
                "trials": len(instances),
                "logical_error_rate": failures / len(instances),
                "drg_toy_mean": float(np.mean(toys)),
                "drg_pm_mean": float(np.mean(pms)),
                "mean_cost": float(np.mean(costs)),
                "mode": mode,
            }
        )
    return rows
