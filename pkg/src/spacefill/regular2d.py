"""Data-driven space-filling curves for 2D regular grids.

Pipeline: cover the grid with 2x2 circuits, build the weighted dual graph of
adjacent circuits, grow a minimum spanning tree with Prim's algorithm, merge
the circuit cycles along tree edges into one Hamiltonian cycle, and cut the
cycle into a Hamiltonian path.

Weight edge assignment (frozen; ``C_i`` and ``C_j`` are side-adjacent
circuits and "growth direction" is the axis from one to the other):

* ``u1, u2`` - the two growth-parallel interior edges of ``C_i`` (one per
  perpendicular lane),
* ``w1, w2`` - the two growth-parallel interior edges of ``C_j``,
* ``c``      - the boundary-crossing term: the mean absolute difference over
  the two edges spanning the circuit boundary (one per lane),
* ``a, b``   - the absolute differences along the facing perpendicular edges
  of ``C_i`` and ``C_j`` - exactly the two edges the cover-and-merge step
  removes.

The value term is ``|u1|+|u2|+|w1|+|w2|+|c|-|a|-|b|``; on data normalized to
[0, 1] it is bounded by 5.  This assignment is symmetric in the two circuits
for any data.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .curve import Curve, Step
from .field import ScalarField, normalize_values
from .grid import GridGraph, grid_graph_from_field
from .validation import check_alpha, check_block_size, check_even_dims

__all__ = [
    "CircuitDualGraph",
    "EdgeWeight",
    "build_circuit_dual_graph",
    "value_weight_2d",
    "position_weight",
    "combined_weight",
    "prim_mst",
    "merge_cycle_2d",
    "cut_cycle_to_path",
    "dd_sfc_2d",
]


@dataclass(frozen=True)
class EdgeWeight:
    """Value and position terms of a dual-graph edge, plus their blend."""

    value_term: float
    position_term: float
    combined: float


class CircuitDualGraph:
    """Dual graph whose nodes are 2x2 circuits (2D) or 2x2x2 cubes (3D)."""

    def __init__(self, dims_dual: Sequence[int], block_size: Sequence[int]):
        self.dims_dual = tuple(int(d) for d in dims_dual)
        self.block_size = check_block_size(block_size, len(self.dims_dual))
        self.weights: dict[tuple, EdgeWeight] = {}
        # half diagonal of a nominal block, in circuit coordinates
        self.block_norm = 0.5 * math.sqrt(sum(b * b for b in self.block_size))

    @property
    def ndim(self) -> int:
        return len(self.dims_dual)

    @property
    def n(self) -> int:
        return int(np.prod(self.dims_dual))

    def circuits(self) -> Iterator[tuple[int, ...]]:
        if self.ndim == 2:
            wd, hd = self.dims_dual
            for cy in range(hd):
                for cx in range(wd):
                    yield (cx, cy)
        else:
            wd, hd, dd = self.dims_dual
            for cz in range(dd):
                for cy in range(hd):
                    for cx in range(wd):
                        yield (cx, cy, cz)

    def contains(self, circuit: Sequence[int]) -> bool:
        return all(0 <= c < d for c, d in zip(circuit, self.dims_dual))

    def neighbors(self, circuit: Sequence[int]) -> list[tuple[int, ...]]:
        circuit = tuple(circuit)
        out = []
        for axis in range(self.ndim):
            for delta in (-1, 1):
                cand = list(circuit)
                cand[axis] += delta
                if 0 <= cand[axis] < self.dims_dual[axis]:
                    out.append(tuple(cand))
        out.sort()
        return out

    def edges(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """All dual edges as (lower, higher) circuit pairs, deterministic order."""
        out = []
        for circuit in self.circuits():
            for axis in range(self.ndim):
                other = list(circuit)
                other[axis] += 1
                if other[axis] < self.dims_dual[axis]:
                    out.append((circuit, tuple(other)))
        return out

    def block_of(self, circuit: Sequence[int]) -> tuple[int, ...]:
        return tuple(c // b for c, b in zip(circuit, self.block_size))

    def block_center(self, circuit: Sequence[int]) -> tuple[float, ...]:
        """Centroid of the circuits in the (possibly boundary-clipped) block."""
        center = []
        for c, b, d in zip(circuit, self.block_size, self.dims_dual):
            lo = (c // b) * b
            hi = min(lo + b, d) - 1
            center.append((lo + hi) / 2.0)
        return tuple(center)

    def edge_key(self, ci, cj) -> tuple:
        return (ci, cj) if tuple(ci) <= tuple(cj) else (tuple(cj), tuple(ci))

    def weight(self, ci, cj) -> EdgeWeight:
        return self.weights[self.edge_key(tuple(ci), tuple(cj))]


def build_circuit_dual_graph(graph: GridGraph, block_size: Sequence[int] = (8, 8)) -> CircuitDualGraph:
    """One dual node per 2x2 circuit of the grid; edges join side-adjacent circuits."""
    dims = check_even_dims(graph.dims)
    dual_dims = tuple(d // 2 for d in dims)
    return CircuitDualGraph(dual_dims, block_size)


def _axis_of_adjacency(ci: tuple[int, ...], cj: tuple[int, ...]) -> int:
    diff = [abs(a - b) for a, b in zip(ci, cj)]
    if sum(diff) != 1 or max(diff) != 1:
        raise ValueError(f"circuits {ci} and {cj} are not side-adjacent")
    return diff.index(1)


def _perpendicular_offsets(ndim: int, axis: int) -> list[tuple[int, ...]]:
    offsets = [()]
    for a in range(ndim):
        if a == axis:
            offsets = [o + (0,) for o in offsets]
        else:
            offsets = [o + (bit,) for o in offsets for bit in (0, 1)]
    return offsets


def value_weight_axis(field: ScalarField, ci, cj) -> float:
    """Generic value weight for adjacent circuits/cubes (shared by 2D and 3D)."""
    ci, cj = tuple(ci), tuple(cj)
    axis = _axis_of_adjacency(ci, cj)
    lo, hi = (ci, cj) if ci[axis] < cj[axis] else (cj, ci)
    ndim = len(ci)
    base_lo = tuple(2 * c for c in lo)
    base_hi = tuple(2 * c for c in hi)

    def vertex(base, offset, along):
        coord = list(b + o for b, o in zip(base, offset))
        coord[axis] = base[axis] + along
        return tuple(coord)

    val = field.value_at
    lanes = _perpendicular_offsets(ndim, axis)
    edge_sum = 0.0
    crossing = []
    for off in lanes:
        edge_sum += abs(val(vertex(base_lo, off, 0)) - val(vertex(base_lo, off, 1)))
        edge_sum += abs(val(vertex(base_hi, off, 0)) - val(vertex(base_hi, off, 1)))
        crossing.append(abs(val(vertex(base_lo, off, 1)) - val(vertex(base_hi, off, 0))))
    c_term = sum(crossing) / len(crossing)

    def face_term(base, along):
        verts = [vertex(base, off, along) for off in lanes]
        pairs = []
        for i, va in enumerate(verts):
            for vb in verts[i + 1 :]:
                if sum(abs(a - b) for a, b in zip(va, vb)) == 1:
                    pairs.append(abs(val(va) - val(vb)))
        return sum(pairs) / len(pairs)

    a_term = face_term(base_lo, 1)
    b_term = face_term(base_hi, 0)
    return edge_sum + c_term - a_term - b_term


def value_weight_2d(field: ScalarField, ci, cj) -> float:
    """Seven-term value weight between adjacent 2D circuits (see module docs)."""
    if field.ndim != 2:
        raise ValueError("value_weight_2d expects a 2D field")
    return value_weight_axis(field, ci, cj)


def position_weight(cj, dual: CircuitDualGraph) -> float:
    """Distance from a circuit to its block center, over half the block diagonal."""
    cj = tuple(cj)
    if not dual.contains(cj):
        raise ValueError(f"circuit {cj} outside dual graph {dual.dims_dual}")
    center = dual.block_center(cj)
    dist = math.sqrt(sum((c - s) ** 2 for c, s in zip(cj, center)))
    return dist / dual.block_norm


def combined_weight(value_term: float, position_term: float, alpha: float) -> float:
    """Affine blend ``(1 - alpha) * N + alpha * R``."""
    alpha = check_alpha(alpha)
    return (1.0 - alpha) * value_term + alpha * position_term


def _value_weights_2d_vectorized(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Value weights for all horizontal and vertical dual edges at once.

    ``arr`` is the normalized field shaped (ny, nx).  Returns ``(N_h, N_v)``
    with ``N_h[cy, cx]`` the weight of edge (cx,cy)-(cx+1,cy) and
    ``N_v[cy, cx]`` the weight of (cx,cy)-(cx,cy+1).
    """
    ny, nx = arr.shape
    wd, hd = nx // 2, ny // 2
    B = arr.reshape(hd, 2, wd, 2)  # B[cy, ry, cx, rx]

    h_top = np.abs(B[:, 0, :, 0] - B[:, 0, :, 1])  # per-circuit top horizontal edge
    h_bot = np.abs(B[:, 1, :, 0] - B[:, 1, :, 1])
    v_left = np.abs(B[:, 0, :, 0] - B[:, 1, :, 0])  # per-circuit left vertical edge
    v_right = np.abs(B[:, 0, :, 1] - B[:, 1, :, 1])

    # horizontal edges: growth along x
    cross_top = np.abs(B[:, 0, :-1, 1] - B[:, 0, 1:, 0])
    cross_bot = np.abs(B[:, 1, :-1, 1] - B[:, 1, 1:, 0])
    N_h = (
        h_top[:, :-1] + h_bot[:, :-1] + h_top[:, 1:] + h_bot[:, 1:]
        + 0.5 * (cross_top + cross_bot)
        - v_right[:, :-1] - v_left[:, 1:]
    )

    # vertical edges: growth along y
    cross_left = np.abs(B[:-1, 1, :, 0] - B[1:, 0, :, 0])
    cross_right = np.abs(B[:-1, 1, :, 1] - B[1:, 0, :, 1])
    N_v = (
        v_left[:-1, :] + v_right[:-1, :] + v_left[1:, :] + v_right[1:, :]
        + 0.5 * (cross_left + cross_right)
        - h_bot[:-1, :] - h_top[1:, :]
    )
    return N_h, N_v


def attach_weights_2d(dual: CircuitDualGraph, normalized: ScalarField, alpha: float) -> None:
    """Compute and store EdgeWeight for every dual edge of a 2D graph."""
    alpha = check_alpha(alpha)
    N_h, N_v = _value_weights_2d_vectorized(normalized.as_array())
    pos = {c: position_weight(c, dual) for c in dual.circuits()}
    for ci, cj in dual.edges():
        axis = 0 if ci[0] != cj[0] else 1
        if axis == 0:
            n_term = float(N_h[ci[1], ci[0]])
        else:
            n_term = float(N_v[ci[1], ci[0]])
        r_term = pos[cj]
        dual.weights[dual.edge_key(ci, cj)] = EdgeWeight(
            value_term=n_term,
            position_term=r_term,
            combined=combined_weight(n_term, r_term, alpha),
        )


def prim_mst(
    dual: CircuitDualGraph,
    alpha: float,
    seed_circuit: Sequence[int] | None = None,
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Minimum spanning tree of the dual graph, grown from the seed circuit.

    At each step the frontier edge of minimum combined weight is added; ties
    break on the lexicographic coordinate of the new node, then of the parent.
    Returns the tree as (parent, child) pairs in insertion order.
    """
    alpha = check_alpha(alpha)
    if seed_circuit is None:
        seed_circuit = (0,) * dual.ndim
    seed = tuple(seed_circuit)
    if not dual.contains(seed):
        raise ValueError(f"seed circuit {seed} outside dual graph {dual.dims_dual}")

    def edge_cost(ci, cj) -> float:
        w = dual.weight(ci, cj)
        return combined_weight(w.value_term, w.position_term, alpha)

    in_tree = {seed}
    tree: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    heap: list[tuple[float, tuple[int, ...], tuple[int, ...]]] = []
    for nbr in dual.neighbors(seed):
        heapq.heappush(heap, (edge_cost(seed, nbr), nbr, seed))
    while len(in_tree) < dual.n:
        if not heap:
            raise ValueError("dual graph is disconnected")
        cost, node, parent = heapq.heappop(heap)
        if node in in_tree:
            continue
        in_tree.add(node)
        tree.append((parent, node))
        for nbr in dual.neighbors(node):
            if nbr not in in_tree:
                heapq.heappush(heap, (edge_cost(node, nbr), nbr, node))
    return tree


def mst_total_weight(dual: CircuitDualGraph, mst, alpha: float) -> float:
    total = 0.0
    for ci, cj in mst:
        w = dual.weight(ci, cj)
        total += combined_weight(w.value_term, w.position_term, alpha)
    return total


def _circuit_vertices(circuit: tuple[int, int]) -> list[tuple[int, int]]:
    cx, cy = circuit
    x0, y0 = 2 * cx, 2 * cy
    return [(x0, y0), (x0 + 1, y0), (x0 + 1, y0 + 1), (x0, y0 + 1)]


def merge_cycle_2d(dual: CircuitDualGraph, mst) -> list[tuple[int, int]]:
    """Merge circuit 4-cycles along MST edges into one Hamiltonian cycle.

    Every MST edge replaces the two facing circuit edges with the two edges
    bridging the circuits.  Returns the cycle as an ordered vertex list.
    """
    nbrs: dict[tuple[int, int], set[tuple[int, int]]] = {}

    def link(a, b):
        nbrs.setdefault(a, set()).add(b)
        nbrs.setdefault(b, set()).add(a)

    def unlink(a, b):
        nbrs[a].discard(b)
        nbrs[b].discard(a)

    for circuit in dual.circuits():
        ring = _circuit_vertices(circuit)
        for a, b in zip(ring, ring[1:] + ring[:1]):
            link(a, b)

    for ci, cj in mst:
        axis = _axis_of_adjacency(ci, cj)
        lo, hi = (ci, cj) if ci[axis] < cj[axis] else (cj, ci)
        # facing edge of the lower circuit lies on its high plane along the axis
        base_lo = [2 * c for c in lo]
        base_lo[axis] += 1
        base_hi = [2 * c for c in hi]
        perp = 1 - axis
        a0 = tuple(base_lo)
        a1 = tuple(base_lo[i] + (1 if i == perp else 0) for i in range(2))
        b0 = tuple(base_hi)
        b1 = tuple(base_hi[i] + (1 if i == perp else 0) for i in range(2))
        unlink(a0, a1)
        unlink(b0, b1)
        link(a0, b0)
        link(a1, b1)

    for v, ns in nbrs.items():
        if len(ns) != 2:
            raise AssertionError(f"cycle merge left vertex {v} with degree {len(ns)}")

    start = min(nbrs)
    second = min(nbrs[start])
    cycle = [start, second]
    while True:
        prev, cur = cycle[-2], cycle[-1]
        nxt = next(iter(nbrs[cur] - {prev}))
        if nxt == start:
            break
        cycle.append(nxt)
    if len(cycle) != len(nbrs):
        raise AssertionError("cycle merge produced more than one cycle")
    return cycle


def cut_cycle_to_path(
    cycle: Sequence[tuple[int, ...]],
    v_s: tuple[int, ...] | None = None,
    *,
    values: np.ndarray | None = None,
    dims: Sequence[int] | None = None,
    method: str = "",
    alpha: float | None = None,
) -> Curve:
    """Cut a Hamiltonian cycle at ``v_s`` into a path starting there.

    Of the two cycle edges at ``v_s`` the one with the larger absolute value
    difference is removed; on ties the predecessor edge goes, where the
    successor direction is the lexicographically smaller neighbor.  ``v_s``
    defaults to the lexicographically smallest coordinate.
    """
    cycle = list(cycle)
    if v_s is None:
        v_s = min(cycle)
    else:
        v_s = tuple(v_s)
        if v_s not in cycle:
            raise ValueError(f"cut vertex {v_s} is not on the cycle")
    if dims is None:
        dims = tuple(max(c[i] for c in cycle) + 1 for i in range(len(cycle[0])))

    idx = cycle.index(v_s)
    before = cycle[idx - 1]
    after = cycle[(idx + 1) % len(cycle)]
    first, other = (before, after) if before <= after else (after, before)

    if values is not None:
        flat = np.asarray(values, dtype=np.float64).ravel()

        def val(coord):
            i = 0
            for c, d in zip(reversed(coord), reversed(tuple(dims))):
                i = i * d + c
            return flat[i]

        d_first = abs(val(v_s) - val(first))
        d_other = abs(val(v_s) - val(other))
    else:
        d_first = d_other = 0.0

    head = first if d_other >= d_first else other
    ordered = cycle[idx:] + cycle[:idx]
    if ordered[1] != head:
        ordered = [ordered[0]] + ordered[:0:-1]
    return Curve([Step(c) for c in ordered], dims=dims, method=method, alpha=alpha)


def dd_sfc_2d(
    field: ScalarField,
    alpha: float = 0.1,
    block_size: Sequence[int] = (8, 8),
    cut_vertex: tuple[int, int] | None = None,
) -> Curve:
    """Data-driven space-filling curve over a 2D field with even dims.

    The blend factor also scales the value differences consulted by the
    cycle-cut choice, so the fully positional setting (alpha=1) is completely
    data-independent.
    """
    alpha = check_alpha(alpha)
    check_even_dims(field.dims)
    normalized = normalize_values(field)
    dual = build_circuit_dual_graph(grid_graph_from_field(field), block_size)
    attach_weights_2d(dual, normalized, alpha)
    mst = prim_mst(dual, alpha, seed_circuit=(0, 0))
    cycle = merge_cycle_2d(dual, mst)
    cut_values = normalized.values * (1.0 - alpha)
    return cut_cycle_to_path(
        cycle,
        cut_vertex,
        values=cut_values,
        dims=field.dims,
        method="ours2d",
        alpha=alpha,
    )
