"""Data-driven space-filling curves for 3D regular grids.

The 2D pipeline extends to 2x2x2 unit cubes: the dual graph and spanning
tree are built the same way, but a unit cube is not itself a cycle, so each
cube is assigned one of the six Hamiltonian cycle configurations of the cube
and neighboring cycles are merged with two association rules: when facing
parallel edges exist in the two facing planes, one such pair is broken and
bridged (rule 1); otherwise two vertex-disjoint edges are broken on each side
and all eight facing vertices are bridged (rule 2).

The value weight between adjacent cubes sums the absolute differences along
the growth-parallel interior edges of both cubes (four lanes each), adds the
mean absolute difference over the four boundary-crossing vertex pairs, and
subtracts the mean absolute difference around each cube's facing plane cycle
- the three-face analogue of the 2D seven-term weight.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curve import Curve
from .errors import CycleAssociationError
from .field import ScalarField, normalize_values
from .grid import grid_graph_from_field
from .regular2d import (
    CircuitDualGraph,
    EdgeWeight,
    combined_weight,
    cut_cycle_to_path,
    position_weight,
    prim_mst,
    value_weight_axis,
)
from .validation import check_alpha, check_even_dims

__all__ = [
    "CubeCycleConfig",
    "CUBE_CYCLE_CONFIGS",
    "build_cube_dual_graph",
    "value_weight_3d",
    "position_weight_3d",
    "assign_cycle_configs",
    "associate_cycles",
    "dd_sfc_3d",
]

Coord = tuple[int, int, int]


@dataclass(frozen=True)
class CubeCycleConfig:
    """One of the six Hamiltonian cycles over the eight unit-cube corners."""

    config_id: int
    edges: tuple[tuple[Coord, Coord], ...]


def _cube_neighbors(v: Coord) -> list[Coord]:
    out = []
    for axis in range(3):
        w = list(v)
        w[axis] ^= 1
        out.append(tuple(w))
    return out


def _enumerate_unit_cycles() -> tuple[CubeCycleConfig, ...]:
    start = (0, 0, 0)
    found: set[frozenset] = set()

    def dfs(path: list[Coord], visited: set[Coord]) -> None:
        v = path[-1]
        if len(path) == 8:
            if start in _cube_neighbors(v):
                ring = path + [start]
                found.add(frozenset(frozenset(e) for e in zip(ring, ring[1:])))
            return
        for w in _cube_neighbors(v):
            if w not in visited:
                dfs(path + [w], visited | {w})

    dfs([start], {start})
    configs = []
    normalized = sorted(
        tuple(sorted(tuple(sorted(e)) for e in edges)) for edges in found
    )
    for i, edges in enumerate(normalized):
        configs.append(CubeCycleConfig(config_id=i, edges=tuple(edges)))
    if len(configs) != 6:
        raise AssertionError(f"expected 6 unit-cube cycle configurations, found {len(configs)}")
    return tuple(configs)


CUBE_CYCLE_CONFIGS = _enumerate_unit_cycles()


def _ordered_cycle(edges: Sequence[tuple[Coord, Coord]]) -> list[Coord]:
    """Edges of a single cycle -> ordered vertex list (canonical start/direction)."""
    nbrs: dict[Coord, list[Coord]] = {}
    for a, b in edges:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    start = min(nbrs)
    second = min(nbrs[start])
    out = [start, second]
    while True:
        prev, cur = out[-2], out[-1]
        ns = nbrs[cur]
        nxt = ns[0] if ns[0] != prev else ns[1]
        if nxt == start:
            return out
        out.append(nxt)


def build_cube_dual_graph(graph, block_size: Sequence[int] = (4, 4, 4)) -> CircuitDualGraph:
    """Dual graph over 2x2x2 unit cubes with 6-adjacency."""
    dims = check_even_dims(graph.dims)
    if len(dims) != 3:
        raise ValueError("build_cube_dual_graph expects a 3D grid")
    return CircuitDualGraph(tuple(d // 2 for d in dims), block_size)


def value_weight_3d(field: ScalarField, ci, cj) -> float:
    """Value weight between 6-adjacent unit cubes (see module docs)."""
    if field.ndim != 3:
        raise ValueError("value_weight_3d expects a 3D field")
    return value_weight_axis(field, ci, cj)


def position_weight_3d(cj, dual: CircuitDualGraph) -> float:
    """3D analogue of the 2D position weight (half-block-diagonal normalized)."""
    if dual.ndim != 3:
        raise ValueError("position_weight_3d expects a 3D dual graph")
    return position_weight(cj, dual)


def attach_weights_3d(dual: CircuitDualGraph, normalized: ScalarField, alpha: float) -> None:
    alpha = check_alpha(alpha)
    pos = {c: position_weight(c, dual) for c in dual.circuits()}
    for ci, cj in dual.edges():
        n_term = value_weight_axis(normalized, ci, cj)
        r_term = pos[cj]
        dual.weights[dual.edge_key(ci, cj)] = EdgeWeight(
            value_term=n_term,
            position_term=r_term,
            combined=combined_weight(n_term, r_term, alpha),
        )


def assign_cycle_configs(mst, rng_seed: int, cubes=None) -> dict[Coord, CubeCycleConfig]:
    """Deterministically draw one of the six configurations per cube.

    ``cubes`` defaults to the nodes of the spanning tree; pass it explicitly
    for single-cube grids where the tree has no edges.
    """
    if cubes is None:
        collected: set[Coord] = set()
        for parent, child in mst:
            collected.add(tuple(parent))
            collected.add(tuple(child))
        cubes = collected
    ordered = sorted(tuple(c) for c in cubes)
    rng = np.random.default_rng(rng_seed)
    ids = rng.integers(0, 6, size=len(ordered))
    return {cube: CUBE_CYCLE_CONFIGS[int(i)] for cube, i in zip(ordered, ids)}


class _CycleSet:
    """One or more disjoint oriented cycles stored as successor/predecessor maps."""

    def __init__(self):
        self.succ: dict[Coord, Coord] = {}
        self.pred: dict[Coord, Coord] = {}

    def add_cycle(self, ordered: Sequence[Coord]) -> None:
        for a, b in zip(ordered, tuple(ordered[1:]) + (ordered[0],)):
            self.succ[a] = b
            self.pred[b] = a

    def remove_cycle(self, vertices: Sequence[Coord]) -> None:
        for v in vertices:
            self.succ.pop(v, None)
            self.pred.pop(v, None)

    def oriented(self, a: Coord, b: Coord) -> tuple[Coord, Coord]:
        if self.succ.get(a) == b:
            return a, b
        if self.succ.get(b) == a:
            return b, a
        raise KeyError(f"edge {a}-{b} not present")

    def plane_edges(self, plane: set[Coord]) -> list[tuple[Coord, Coord]]:
        """Current cycle edges with both endpoints in ``plane`` (sorted pairs)."""
        out = set()
        for v in plane:
            w = self.succ.get(v)
            if w in plane:
                out.add((v, w) if v <= w else (w, v))
            u = self.pred.get(v)
            if u in plane:
                out.add((u, v) if u <= v else (v, u))
        return sorted(out)

    def _reverse_chain(self, start: Coord, end: Coord) -> None:
        """Reverse the succ-direction of the chain start -> ... -> end."""
        chain = [start]
        while chain[-1] != end:
            chain.append(self.succ[chain[-1]])
        for a, b in zip(chain, chain[1:]):
            self.succ[b] = a
            self.pred[a] = b

    def _link(self, a: Coord, b: Coord) -> None:
        self.succ[a] = b
        self.pred[b] = a

    def rule1_merge(self, e_p: tuple[Coord, Coord], delta: Coord) -> None:
        """Break a facing parallel pair and bridge the four endpoints."""
        s, t = self.oriented(*e_p)
        qs = tuple(a + d for a, d in zip(s, delta))
        qt = tuple(a + d for a, d in zip(t, delta))
        if self.succ[qs] == qt:
            # the q-side remainder must run qs -> ... -> qt: flip the q cycle
            ring = self.walk(qs)
            ring.reverse()
            self.add_cycle(ring)
        if self.succ[qt] != qs:
            raise CycleAssociationError("facing edge not present on the q side")
        self._link(s, qs)
        self._link(qt, t)

    def rule2_merge(
        self,
        p_pair: tuple[tuple[Coord, Coord], tuple[Coord, Coord]],
        q_pair: tuple[tuple[Coord, Coord], tuple[Coord, Coord]],
        delta: Coord,
        dry_run: bool = False,
    ) -> bool:
        """Break two vertex-disjoint edges per side and bridge all eight endpoints.

        Returns False (without mutating) when the bridging would split the
        union into two cycles instead of one.
        """

        def shift(v: Coord) -> Coord:
            return tuple(a + d for a, d in zip(v, delta))

        s1, t1 = self.oriented(*p_pair[0])
        s2, t2 = self.oriented(*p_pair[1])
        w1, x1 = self.oriented(*q_pair[0])
        w2, x2 = self.oriented(*q_pair[1])
        # arcs after removal: A: t1->..->s2, B: t2->..->s1 (big side);
        # C: x1->..->w2, D: x2->..->w1 (q side)
        q_arcs = {x1: ("C", "fwd", w2), w2: ("C", "rev", x1), x2: ("D", "fwd", w1), w1: ("D", "rev", x2)}

        first_in = shift(s2)
        if first_in not in q_arcs:
            return False
        arc1_name, arc1_dir, arc1_out = q_arcs[first_in]
        back1 = tuple(a - d for a, d in zip(arc1_out, delta))
        if back1 == t1:
            return False  # would close early: two cycles
        if back1 == t2:
            b_reversed = False
        elif back1 == s1:
            b_reversed = True
        else:
            return False
        second_in = shift(s1) if not b_reversed else shift(t2)
        if second_in not in q_arcs:
            return False
        arc2_name, arc2_dir, arc2_out = q_arcs[second_in]
        if arc2_name == arc1_name:
            return False
        back2 = tuple(a - d for a, d in zip(arc2_out, delta))
        if back2 != t1:
            return False
        if dry_run:
            return True

        if arc1_dir == "rev":
            self._reverse_chain(arc1_out, first_in)
        if arc2_dir == "rev":
            self._reverse_chain(arc2_out, second_in)
        if b_reversed:
            self._reverse_chain(t2, s1)
            self._link(s2, first_in)
            self._link(arc1_out, s1)
            self._link(t2, second_in)
            self._link(arc2_out, t1)
        else:
            self._link(s2, first_in)
            self._link(arc1_out, t2)
            self._link(s1, second_in)
            self._link(arc2_out, t1)
        return True

    def walk(self, start: Coord) -> list[Coord]:
        out = [start]
        v = self.succ[start]
        while v != start:
            out.append(v)
            v = self.succ[v]
        return out


def _cube_plane(cube: Coord, axis: int, side: int) -> list[Coord]:
    """The four vertices of a cube's face plane (side 0 = low, 1 = high)."""
    base = tuple(2 * c for c in cube)
    out = []
    for o1 in (0, 1):
        for o2 in (0, 1):
            offs = [0, 0, 0]
            perp = [a for a in range(3) if a != axis]
            offs[perp[0]] = o1
            offs[perp[1]] = o2
            offs[axis] = side
            out.append(tuple(b + o for b, o in zip(base, offs)))
    return sorted(out)


def _disjoint_pairs(edges: list[tuple[Coord, Coord]]):
    out = []
    for i, e1 in enumerate(edges):
        for e2 in edges[i + 1 :]:
            if not set(e1) & set(e2):
                out.append((e1, e2))
    return out


def _try_associate(
    cycles: _CycleSet,
    parent: Coord,
    cube: Coord,
    config: CubeCycleConfig,
    values: np.ndarray | None,
    dims: tuple[int, ...] | None,
) -> bool:
    """Attach ``cube``'s unit cycle (given config) to the cycle at ``parent``."""
    axis = next(a for a in range(3) if parent[a] != cube[a])
    direction = 1 if cube[axis] > parent[axis] else -1
    delta = tuple(direction if a == axis else 0 for a in range(3))
    p_plane = set(_cube_plane(parent, axis, 1 if direction > 0 else 0))
    q_plane = set(_cube_plane(cube, axis, 0 if direction > 0 else 1))

    base = tuple(2 * c for c in cube)
    unit = [
        tuple(sorted((tuple(b + o for b, o in zip(base, ea)), tuple(b + o for b, o in zip(base, eb)))))
        for ea, eb in config.edges
    ]
    ring = _ordered_cycle(unit)
    cycles.add_cycle(ring)

    p_edges = [e for e in cycles.plane_edges(p_plane) if set(e) <= p_plane]
    q_edges = [e for e in cycles.plane_edges(q_plane) if set(e) <= q_plane]
    q_edge_set = set(q_edges)

    def shift_edge(e):
        return tuple(sorted(tuple(a + d for a, d in zip(v, delta)) for v in e))

    def bridge_cost(e):
        if values is None:
            return 0.0
        a, b = e
        qa = tuple(x + d for x, d in zip(a, delta))
        qb = tuple(x + d for x, d in zip(b, delta))

        def val(c):
            i = 0
            for x, d in zip(reversed(c), reversed(dims)):
                i = i * d + x
            return values[i]

        return abs(val(a) - val(qa)) + abs(val(b) - val(qb))

    rule1 = [e for e in p_edges if shift_edge(e) in q_edge_set]
    if rule1:
        best = min(rule1, key=lambda e: (bridge_cost(e), e))
        cycles.rule1_merge(best, delta)
        return True

    for p_pair in _disjoint_pairs(p_edges):
        for q_pair in _disjoint_pairs(q_edges):
            if cycles.rule2_merge(p_pair, q_pair, delta, dry_run=True):
                cycles.rule2_merge(p_pair, q_pair, delta)
                return True

    cycles.remove_cycle(ring)
    return False


def associate_cycles(
    cycle_a: Sequence[Coord],
    cycle_b: Sequence[Coord],
    shared_face: int,
    values: np.ndarray | None = None,
    dims: tuple[int, ...] | None = None,
) -> list[Coord]:
    """Merge the cycles of two face-adjacent cubes into one cycle.

    ``shared_face`` is the axis along which the cubes are adjacent; the
    association applies rule 1 when a facing parallel edge pair exists
    (choosing the pair with the cheapest new bridges) and rule 2 otherwise.
    """
    axis = shared_face
    a_hi = max(v[axis] for v in cycle_a)
    b_lo = min(v[axis] for v in cycle_b)
    if b_lo != a_hi + 1:
        b_hi = max(v[axis] for v in cycle_b)
        a_lo = min(v[axis] for v in cycle_a)
        if a_lo != b_hi + 1:
            raise CycleAssociationError("cycles are not adjacent along the shared face axis")
        cycle_a, cycle_b = cycle_b, cycle_a
        a_hi = max(v[axis] for v in cycle_a)

    cycles = _CycleSet()
    cycles.add_cycle(list(cycle_a))
    delta = tuple(1 if a == axis else 0 for a in range(3))
    p_plane = {v for v in cycle_a if v[axis] == a_hi}
    q_plane = {tuple(a + d for a, d in zip(v, delta)) for v in p_plane}

    cycles.add_cycle(list(cycle_b))
    p_edges = [e for e in cycles.plane_edges(p_plane) if set(e) <= p_plane]
    q_edges = [e for e in cycles.plane_edges(q_plane) if set(e) <= q_plane]
    q_edge_set = set(q_edges)

    def shift_edge(e):
        return tuple(sorted(tuple(a + d for a, d in zip(v, delta)) for v in e))

    def bridge_cost(e):
        if values is None:
            return 0.0
        a, b = e
        qa = tuple(x + d for x, d in zip(a, delta))
        qb = tuple(x + d for x, d in zip(b, delta))

        def val(c):
            i = 0
            for x, d in zip(reversed(c), reversed(dims)):
                i = i * d + x
            return values[i]

        return abs(val(a) - val(qa)) + abs(val(b) - val(qb))

    rule1 = [e for e in p_edges if shift_edge(e) in q_edge_set]
    if rule1:
        best = min(rule1, key=lambda e: (bridge_cost(e), e))
        cycles.rule1_merge(best, delta)
    else:
        done = False
        for p_pair in _disjoint_pairs(p_edges):
            for q_pair in _disjoint_pairs(q_edges):
                if cycles.rule2_merge(p_pair, q_pair, delta, dry_run=True):
                    cycles.rule2_merge(p_pair, q_pair, delta)
                    done = True
                    break
            if done:
                break
        if not done:
            raise CycleAssociationError("no applicable association for the two cycles")
    return cycles.walk(min(cycle_a))


def dd_sfc_3d(
    field: ScalarField,
    alpha: float = 0.1,
    block_size: Sequence[int] = (4, 4, 4),
    rng_seed: int = 0,
    cut_vertex: Coord | None = None,
) -> Curve:
    """Data-driven space-filling curve over a 3D field with even dims."""
    alpha = check_alpha(alpha)
    dims = check_even_dims(field.dims)
    if len(dims) != 3:
        raise ValueError("dd_sfc_3d expects a 3D field")
    normalized = normalize_values(field)
    dual = build_cube_dual_graph(grid_graph_from_field(field), block_size)
    attach_weights_3d(dual, normalized, alpha)
    seed_cube = (0, 0, 0)
    mst = prim_mst(dual, alpha, seed_circuit=seed_cube)
    configs = assign_cycle_configs(mst, rng_seed, cubes=dual.circuits())
    scaled = normalized.values * (1.0 - alpha)

    children: dict[Coord, list[Coord]] = {}
    for parent, child in mst:
        children.setdefault(parent, []).append(child)

    cycles = _CycleSet()
    seed_config = configs[seed_cube]
    base = tuple(2 * c for c in seed_cube)
    seed_edges = [
        tuple(sorted((tuple(b + o for b, o in zip(base, ea)), tuple(b + o for b, o in zip(base, eb)))))
        for ea, eb in seed_config.edges
    ]
    cycles.add_cycle(_ordered_cycle(seed_edges))
    merged = {seed_cube}

    def config_candidates(cube: Coord):
        assigned = configs[cube]
        rest = [c for c in CUBE_CYCLE_CONFIGS if c.config_id != assigned.config_id]
        return [assigned] + rest

    def attach(parent: Coord, cube: Coord) -> bool:
        for config in config_candidates(cube):
            if _try_associate(cycles, parent, cube, config, scaled, dims):
                return True
        return False

    queue = deque([seed_cube])
    order = []
    while queue:
        cube = queue.popleft()
        for child in sorted(children.get(cube, [])):
            order.append((cube, child))
            queue.append(child)
    deferred: list[tuple[Coord, Coord]] = []
    for parent, cube in order:
        if attach(parent, cube):
            merged.add(cube)
        else:
            deferred.append((parent, cube))
    # retry deferred cubes against any merged face neighbor
    progress = True
    while deferred and progress:
        progress = False
        still: list[tuple[Coord, Coord]] = []
        for parent, cube in deferred:
            done = False
            for nbr in sorted(dual.neighbors(cube)):
                if nbr in merged and attach(nbr, cube):
                    merged.add(cube)
                    done = True
                    progress = True
                    break
            if not done:
                still.append((parent, cube))
        deferred = still
    if deferred:
        raise CycleAssociationError(
            f"could not associate {len(deferred)} cube(s) into the Hamiltonian cycle"
        )

    n = int(np.prod(dims))
    cycle = cycles.walk((0, 0, 0))
    if len(cycle) != n:
        raise AssertionError(
            f"cycle merge covered {len(cycle)} of {n} voxels"
        )
    return cut_cycle_to_path(
        cycle,
        cut_vertex,
        values=scaled,
        dims=dims,
        method="ours3d",
        alpha=alpha,
    )
