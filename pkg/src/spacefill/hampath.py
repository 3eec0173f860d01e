"""Flexible minimum Hamiltonian paths on box grid graphs.

A problem is a box of cells with per-cell values, an entry vertex, and an
exit face: the solver returns the cheapest Hamiltonian path from the entry
vertex to any parity-feasible vertex on the exit face, where the cost is the
sum of absolute value differences along the path.  Small boxes are solved by
an iterative stack-based depth-first search with branch-and-bound pruning;
larger boxes are bisected and the halves chained through the cut.

Faces are ``(axis, side)`` pairs: side 0 is the low face of the axis, side 1
the high face.  ``exit_face=None`` allows the path to end anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curve import Curve, Step
from .errors import NoHamiltonianPath
from .field import ScalarField
from .validation import check_coord, check_dims

__all__ = [
    "HamPathProblem",
    "PathObjective",
    "parity_feasible",
    "exhaustive_min_hampath",
    "partitioned_hampath",
    "path_cost",
    "DEFAULT_DIRECT_LIMIT",
]

DEFAULT_DIRECT_LIMIT = 32


@dataclass(frozen=True)
class HamPathProblem:
    """A box grid graph with values, an entry vertex, and an exit face."""

    dims: tuple[int, ...]
    values: np.ndarray
    v_s: tuple[int, ...]
    exit_face: tuple[int, int] | None

    @classmethod
    def create(cls, dims, values, v_s, exit_face) -> "HamPathProblem":
        dims = check_dims(dims)
        flat = np.asarray(values, dtype=np.float64).ravel()
        if flat.size != int(np.prod(dims)):
            raise ValueError(f"values size {flat.size} does not match dims {dims}")
        v_s = check_coord(v_s, dims, name="entry vertex")
        if exit_face is not None:
            axis, side = exit_face
            if not (0 <= axis < len(dims) and side in (0, 1)):
                raise ValueError(f"invalid exit face {exit_face} for dims {dims}")
            exit_face = (int(axis), int(side))
        return cls(dims=dims, values=flat, v_s=v_s, exit_face=exit_face)

    @property
    def n(self) -> int:
        return int(np.prod(self.dims))

    def on_face(self, coord: Sequence[int], face: tuple[int, int]) -> bool:
        axis, side = face
        target = 0 if side == 0 else self.dims[axis] - 1
        return coord[axis] == target


@dataclass(frozen=True)
class PathObjective:
    """Total absolute value change along a path."""

    cost: float


def _color(coord: Sequence[int]) -> int:
    return sum(coord) % 2


def parity_feasible(problem: HamPathProblem, v_t: Sequence[int]) -> bool:
    """Checkerboard condition for a Hamiltonian path from the entry to ``v_t``.

    Even vertex counts need endpoints of opposite colors; odd counts need both
    endpoints on the majority color (the color of the origin corner).
    """
    v_t = tuple(v_t)
    if problem.n % 2 == 0:
        return _color(problem.v_s) != _color(v_t)
    return _color(problem.v_s) == 0 and _color(v_t) == 0


def _coords_and_neighbors(dims: tuple[int, ...]):
    """Flat index tables: coordinates, lex-sorted neighbor lists, neighbor bitmasks."""
    ndim = len(dims)
    n = int(np.prod(dims))

    def coord_of(i: int) -> tuple[int, ...]:
        out = []
        for d in dims:
            out.append(i % d)
            i //= d
        return tuple(out)

    def index_of(c: Sequence[int]) -> int:
        idx = 0
        for v, d in zip(reversed(tuple(c)), reversed(dims)):
            idx = idx * d + v
        return idx

    coords = [coord_of(i) for i in range(n)]
    neighbors: list[list[int]] = []
    masks: list[int] = []
    for i in range(n):
        c = coords[i]
        nbr_coords = []
        for axis in range(ndim):
            for delta in (-1, 1):
                q = list(c)
                q[axis] += delta
                if 0 <= q[axis] < dims[axis]:
                    nbr_coords.append(tuple(q))
        nbr_coords.sort()
        idxs = [index_of(q) for q in nbr_coords]
        neighbors.append(idxs)
        m = 0
        for j in idxs:
            m |= 1 << j
        masks.append(m)
    return coords, neighbors, masks, index_of


def _region_connected(region: int, seed: int, masks: list[int]) -> bool:
    """True when all bits of ``region`` are reachable from the bits of ``seed``."""
    comp = seed & region
    if comp == 0:
        return region == 0
    while True:
        grow = 0
        m = comp
        while m:
            low = m & -m
            grow |= masks[low.bit_length() - 1]
            m ^= low
        nxt = (comp | grow) & region
        if nxt == comp:
            return comp == region
        comp = nxt


def exhaustive_min_hampath(
    problem: HamPathProblem,
    *,
    direct_limit: int = DEFAULT_DIRECT_LIMIT,
    excluded_exits: frozenset[tuple[int, ...]] = frozenset(),
    cost_pruning: bool = True,
    stats_out: dict | None = None,
) -> tuple[Curve, float]:
    """Minimum-cost Hamiltonian path by stack-based DFS with branch and bound.

    Among all Hamiltonian paths from the entry vertex to a parity-feasible
    vertex on the exit face, returns one minimizing the path cost; ties are
    broken by lexicographic order of the coordinate sequence.  Raises
    :class:`NoHamiltonianPath` when none exists.

    Pass a dict as ``stats_out`` to collect search statistics (nodes
    expanded, cost prunes, connectivity prunes).
    """
    n = problem.n
    if n > direct_limit:
        raise ValueError(f"box of {n} vertices exceeds the direct-solve limit {direct_limit}")
    coords, neighbors, masks, index_of = _coords_and_neighbors(problem.dims)
    values = problem.values

    target_mask = 0
    for i in range(n):
        c = coords[i]
        if problem.exit_face is not None and not problem.on_face(c, problem.exit_face):
            continue
        if c in excluded_exits:
            continue
        if parity_feasible(problem, c):
            target_mask |= 1 << i
    stats = {"nodes_expanded": 0, "pruned_cost": 0, "pruned_connectivity": 0}
    if target_mask == 0:
        if stats_out is not None:
            stats_out.update(stats)
        raise NoHamiltonianPath(
            f"no parity-feasible exit vertex on face {problem.exit_face} from {problem.v_s}"
        )

    start = index_of(problem.v_s)
    full_mask = (1 << n) - 1
    best_cost = None
    best_path: list[int] | None = None

    if n == 1:
        if stats_out is not None:
            stats_out.update(stats)
        return (
            Curve([Step(coords[start])], dims=problem.dims, method="hampath"),
            0.0,
        )

    # children expanded cheapest edge first (ties lexicographic): the first
    # completed path seeds a tight bound, and on tie-heavy data the order
    # degenerates to plain lexicographic order
    children: list[list[int]] = []
    for v in range(n):
        ranked = sorted(neighbors[v], key=lambda w: (abs(values[w] - values[v]), coords[w]))
        children.append(ranked)

    # admissible remaining-cost bound: an unvisited vertex interior to the
    # remaining path has two incident path edges, the final vertex one; each
    # path edge is shared by two vertices, hence the half-sums of the one or
    # two cheapest incident differences
    min12 = []
    for v in range(n):
        incident = sorted(abs(values[w] - values[v]) for w in neighbors[v])
        m1 = incident[0]
        m2 = incident[1] if len(incident) > 1 else incident[0]
        min12.append(m1 + m2)
    target_relief = max(
        (min12[t] - min(abs(values[w] - values[t]) for w in neighbors[t]))
        for t in range(n)
        if target_mask >> t & 1
    )
    lower_sum = sum(min12) - min12[start]

    path = [start]
    costs = [0.0]
    visited = 1 << start
    stack = [(start, 0)]

    while stack:
        v, child_idx = stack[-1]
        advanced = False
        nbrs = children[v]
        while child_idx < len(nbrs):
            w = nbrs[child_idx]
            child_idx += 1
            wbit = 1 << w
            if visited & wbit:
                continue
            step_cost = costs[-1] + abs(values[w] - values[v])
            if cost_pruning and best_cost is not None:
                bound = step_cost + 0.5 * (lower_sum - min12[w] - target_relief)
                if bound >= best_cost:
                    stats["pruned_cost"] += 1
                    continue
            if visited | wbit == full_mask:
                if target_mask & wbit and (best_cost is None or step_cost < best_cost):
                    best_cost = step_cost
                    best_path = path + [w]
                continue
            remaining = full_mask & ~visited & ~wbit
            if remaining & target_mask == 0:
                stats["pruned_connectivity"] += 1
                continue
            if not _region_connected(remaining, masks[w], masks):
                stats["pruned_connectivity"] += 1
                continue
            stack[-1] = (v, child_idx)
            stack.append((w, 0))
            path.append(w)
            costs.append(step_cost)
            visited |= wbit
            lower_sum -= min12[w]
            stats["nodes_expanded"] += 1
            advanced = True
            break
        if not advanced:
            stack.pop()
            popped = path.pop()
            costs.pop()
            visited &= ~(1 << popped)
            if popped != start:
                lower_sum += min12[popped]

    if stats_out is not None:
        stats_out.update(stats)
    if best_path is None:
        raise NoHamiltonianPath(
            f"no Hamiltonian path from {problem.v_s} to face {problem.exit_face} "
            f"in box {problem.dims}"
        )
    steps = [Step(coords[i]) for i in best_path]
    return Curve(steps, dims=problem.dims, method="hampath"), float(best_cost)


def _axis_candidates(problem: HamPathProblem) -> list[int]:
    """Bisection axes in preference order.

    Axes parallel to the exit face (equivalently, perpendicular to the travel
    direction when entry and exit sit on opposite faces) come first, longest
    first; the exit-face normal is the fallback.  Axes of extent 1 are skipped.
    """
    dims = problem.dims
    ndim = len(dims)
    if problem.exit_face is None:
        order = sorted(range(ndim), key=lambda a: (-dims[a], a))
    else:
        normal = problem.exit_face[0]
        parallel = sorted(
            (a for a in range(ndim) if a != normal), key=lambda a: (-dims[a], a)
        )
        order = parallel + [normal]
    return [a for a in order if dims[a] >= 2]


def _slice_values(values: np.ndarray, dims, axis: int, lo: int, hi: int) -> np.ndarray:
    arr = values.reshape(tuple(reversed(dims)))
    index = [slice(None)] * len(dims)
    index[len(dims) - 1 - axis] = slice(lo, hi)
    return arr[tuple(index)].ravel()


def partitioned_hampath(
    problem: HamPathProblem,
    *,
    direct_limit: int = DEFAULT_DIRECT_LIMIT,
    excluded_exits: frozenset[tuple[int, ...]] = frozenset(),
) -> tuple[Curve, float]:
    """Hamiltonian path for boxes of any size by recursive bisection.

    Boxes over the direct-solve limit are bisected; the half holding the entry
    vertex is solved toward the cut, the other half is entered at the vertex
    directly across from the first half's exit and solved toward the original
    exit face.  When the second half is infeasible from that vertex, the first
    half is re-solved with that exit excluded; when a bisection axis is
    exhausted, the next candidate axis is tried.
    """
    if problem.n <= direct_limit:
        return exhaustive_min_hampath(
            problem, direct_limit=direct_limit, excluded_exits=excluded_exits
        )

    dims = problem.dims
    last_error: Exception | None = None
    for axis in _axis_candidates(problem):
        mid = dims[axis] // 2
        lo_box = (0, mid)
        hi_box = (mid, dims[axis])
        in_lo = problem.v_s[axis] < mid
        first_rng, second_rng = (lo_box, hi_box) if in_lo else (hi_box, lo_box)
        if problem.exit_face is not None and problem.exit_face[0] == axis:
            exit_side = problem.exit_face[1]
            exit_in_first = (exit_side == 0) == (first_rng == lo_box)
            if exit_in_first:
                continue  # the chain must end in the second half
        cut_face_first = (axis, 1 if first_rng == lo_box else 0)

        def sub_problem(rng, v_s, exit_face):
            sub_dims = list(dims)
            sub_dims[axis] = rng[1] - rng[0]
            vals = _slice_values(problem.values, dims, axis, rng[0], rng[1])
            return HamPathProblem.create(tuple(sub_dims), vals, v_s, exit_face)

        def to_local(coord, rng):
            c = list(coord)
            c[axis] -= rng[0]
            return tuple(c)

        def to_global(coord, rng):
            c = list(coord)
            c[axis] += rng[0]
            return tuple(c)

        first_excluded: set[tuple[int, ...]] = set()
        while True:
            first = sub_problem(first_rng, to_local(problem.v_s, first_rng), cut_face_first)
            try:
                curve_a, _ = partitioned_hampath(
                    first,
                    direct_limit=direct_limit,
                    excluded_exits=frozenset(first_excluded),
                )
            except NoHamiltonianPath as exc:
                last_error = exc
                break
            exit_local = curve_a.steps[-1].coord
            exit_global = to_global(exit_local, first_rng)
            entry_global = list(exit_global)
            entry_global[axis] += 1 if first_rng == lo_box else -1
            entry_local = to_local(tuple(entry_global), second_rng)
            second = sub_problem(second_rng, entry_local, problem.exit_face)
            try:
                curve_b, _ = partitioned_hampath(
                    second, direct_limit=direct_limit, excluded_exits=excluded_exits
                )
            except NoHamiltonianPath as exc:
                last_error = exc
                first_excluded.add(exit_local)
                continue
            steps = [Step(to_global(s.coord, first_rng)) for s in curve_a.steps]
            steps += [Step(to_global(s.coord, second_rng)) for s in curve_b.steps]
            curve = Curve(steps, dims=dims, method="hampath")
            return curve, path_cost(curve, problem.values)
    raise NoHamiltonianPath(
        f"no Hamiltonian path from {problem.v_s} to face {problem.exit_face} "
        f"in box {dims} under any bisection"
        + (f" ({last_error})" if last_error else "")
    )


def path_cost(curve: Curve, values, dims: Sequence[int] | None = None) -> float:
    """Sum of absolute value differences along consecutive curve steps."""
    if len(curve.steps) == 0:
        raise ValueError("path_cost requires a nonempty curve")
    if isinstance(values, ScalarField):
        flat = values.values
        dims = values.dims
    else:
        flat = np.asarray(values, dtype=np.float64).ravel()
        dims = tuple(dims) if dims is not None else curve.dims

    def index_of(c):
        idx = 0
        for v, d in zip(reversed(c), reversed(dims)):
            idx = idx * d + v
        return idx

    total = 0.0
    prev = None
    for step in curve.steps:
        cur = flat[index_of(step.coord)]
        if prev is not None:
            total += abs(cur - prev)
        prev = cur
    return float(total)
