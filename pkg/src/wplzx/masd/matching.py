"""Minimum-weight perfect matching on defect graphs.

Instances with at most :data:`DP_VERTEX_CAP` real defects are solved exactly
by an O(n^2 2^n) subset DP; beyond the cap a greedy nearest-pair heuristic is
used and the result is flagged approximate.  Virtual boundary vertices in the
one-virtual-per-defect pattern are folded into per-vertex retirement costs,
so only the real defects enter the DP mask.

Kernel selection happens at import: the compiled extension is preferred, the
pure-Python kernel in ``_dp`` is the fallback, and setting WPLZX_FORCE_PURE=1
forces the fallback (used by the benchmark for comparison).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Mapping, Union

from ..errors import OddVertexCount, TooLargeForExact
from . import _dp
from .graph import DefectGraph, VertexId

DP_VERTEX_CAP = 16

if os.environ.get("WPLZX_FORCE_PURE") == "1":
    _kernel = _dp
else:
    try:
        from . import _dpmatch as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _dp


def kernel_name() -> str:
    """Which DP kernel is active: 'compiled' or 'pure'."""
    return "compiled" if _kernel.__name__.endswith("_dpmatch") else "pure"


WeightSource = Union[Mapping, Callable[[VertexId, VertexId], float]]


def _weight_fn(weights: WeightSource) -> Callable[[VertexId, VertexId], float]:
    if callable(weights):
        return weights

    def lookup(u: VertexId, v: VertexId) -> float:
        for key in (frozenset((u, v)), (u, v), (v, u)):
            if key in weights:
                return float(weights[key])
        return math.inf

    return lookup


@dataclass(frozen=True)
class Matching:
    """A perfect matching: vertex-id pairs, its cost, and an exactness flag."""

    pairs: tuple[tuple[VertexId, VertexId], ...]
    total_cost: float
    exact: bool

    @property
    def size(self) -> int:
        return len(self.pairs)

    def covers(self, vertex_ids) -> bool:
        seen = [v for pair in self.pairs for v in pair]
        return sorted(seen, key=repr) == sorted(vertex_ids, key=repr) and len(
            set(seen)
        ) == len(seen)


def _own_virtual_map(g: DefectGraph, wf) -> dict | None:
    """Map real id -> (virtual id, cost) when virtuals follow the
    one-per-defect pattern (each virtual adjacent to at most one real)."""
    reals = [v.id for v in g.real_vertices]
    virts = [v.id for v in g.virtual_vertices]
    if len(virts) < len(reals):
        return None
    real_set = set(reals)
    attached: dict[VertexId, list] = {v: [] for v in virts}
    for e in g.edges:
        if e.u in real_set and e.v in attached:
            attached[e.v].append(e.u)
        elif e.v in real_set and e.u in attached:
            attached[e.u].append(e.v)
    if any(len(r) > 1 for r in attached.values()):
        return None
    out: dict[VertexId, tuple] = {}
    for virt, rs in attached.items():
        for r in rs:
            cost = wf(r, virt)
            if r not in out or cost < out[r][1]:
                out[r] = (virt, cost)
    return out


def min_weight_perfect_matching(
    g: DefectGraph,
    weights: WeightSource,
    require_exact: bool = False,
) -> Matching:
    """Match all vertices of g at minimum total weight.

    Exact (subset DP) when the number of real defects is within the cap,
    greedy otherwise; ``require_exact`` turns the fallback into an error.
    Raises OddVertexCount when no perfect matching can exist.
    """
    wf = _weight_fn(weights)
    reals = [v.id for v in g.real_vertices]
    virts = [v.id for v in g.virtual_vertices]
    if (len(reals) + len(virts)) % 2 != 0:
        raise OddVertexCount(f"{len(reals) + len(virts)} vertices cannot be perfectly matched")

    own = _own_virtual_map(g, wf) if virts else {}
    if virts and own is None:
        # Arbitrary virtual layout: treat every vertex uniformly.
        return _match_flat(g, wf, require_exact)

    n = len(reals)
    if n > DP_VERTEX_CAP:
        if require_exact:
            raise TooLargeForExact(f"{n} real defects exceed the exact cap {DP_VERTEX_CAP}")
        return _greedy(reals, virts, wf, own)

    import numpy as np

    w = np.full((n, n), np.inf)
    for i in range(n):
        for j in range(i + 1, n):
            w[i, j] = w[j, i] = wf(reals[i], reals[j])
    boundary = np.array([own.get(r, (None, np.inf))[1] for r in reals])
    cost, choice = _kernel.solve_dense(w, boundary)
    if not math.isfinite(cost):
        raise OddVertexCount("graph admits no finite-cost perfect matching")
    moves = _dp.reconstruct(choice, n)
    pairs: list[tuple[VertexId, VertexId]] = []
    used_virts = set()
    for i, j in moves:
        if j == -1:
            virt = own[reals[i]][0]
            pairs.append((reals[i], virt))
            used_virts.add(virt)
        else:
            pairs.append((reals[i], reals[j]))
    leftover = sorted((v for v in virts if v not in used_virts), key=repr)
    for i in range(0, len(leftover), 2):
        pairs.append((leftover[i], leftover[i + 1]))
    return Matching(tuple(pairs), cost, exact=True)


def _match_flat(g: DefectGraph, wf, require_exact: bool) -> Matching:
    ids = [v.id for v in g.vertices]
    n = len(ids)
    if n > DP_VERTEX_CAP:
        if require_exact:
            raise TooLargeForExact(f"{n} vertices exceed the exact cap {DP_VERTEX_CAP}")
        return _greedy(ids, [], wf, {})
    import numpy as np

    w = np.full((n, n), np.inf)
    for i in range(n):
        for j in range(i + 1, n):
            w[i, j] = w[j, i] = wf(ids[i], ids[j])
    boundary = np.full(n, np.inf)
    cost, choice = _kernel.solve_dense(w, boundary)
    if not math.isfinite(cost):
        raise OddVertexCount("graph admits no finite-cost perfect matching")
    moves = _dp.reconstruct(choice, n)
    pairs = tuple((ids[i], ids[j]) for i, j in moves)
    return Matching(pairs, cost, exact=True)


def _greedy(reals, virts, wf, own) -> Matching:
    """Nearest-pair heuristic; output flagged approximate."""
    candidates = []
    for i in range(len(reals)):
        for j in range(i + 1, len(reals)):
            candidates.append((wf(reals[i], reals[j]), 0, reals[i], reals[j]))
        if reals[i] in own:
            virt, cost = own[reals[i]]
            candidates.append((cost, 1, reals[i], virt))
    candidates.sort(key=lambda c: (c[0], c[1], repr(c[2]), repr(c[3])))
    matched: set[VertexId] = set()
    pairs: list[tuple[VertexId, VertexId]] = []
    total = 0.0
    for cost, _, u, v in candidates:
        if u in matched or v in matched or not math.isfinite(cost):
            continue
        pairs.append((u, v))
        matched.update((u, v))
        total += cost
    unmatched_reals = [r for r in reals if r not in matched]
    for i in range(0, len(unmatched_reals) - 1, 2):
        u, v = unmatched_reals[i], unmatched_reals[i + 1]
        pairs.append((u, v))
        total += wf(u, v)
        matched.update((u, v))
    leftover = sorted((v for v in virts if v not in matched), key=repr)
    for i in range(0, len(leftover) - 1, 2):
        pairs.append((leftover[i], leftover[i + 1]))
    return Matching(tuple(pairs), total, exact=False)
