"""Data-driven curves over quadtrees/octrees: top-level curve plus recursive
refinement with data-driven entry selection.

The traversal orders the coarsest cells first (using the regular-grid
generator when their dims are even, a flexible Hamiltonian path otherwise),
then refines each block: an internal block's children are ordered by a
Hamiltonian path on their 2x2(x2) index grid, entered at the child whose
aggregate is closest to the value of the last visited leaf and exited toward
the block's successor.  The last block of any sequence has a free exit.

Entry candidates are restricted to children whose boxes touch the previous
leaf's box through the shared face, so on a fully refined tree of
power-of-two dims the concatenated curve is a Hamiltonian path of the fine
grid.
"""

from __future__ import annotations

import numpy as np

from .curve import Curve, Step
from .errors import NoHamiltonianPath, TreeFormatError
from .field import ScalarField, ValuePyramid
from .hampath import HamPathProblem, exhaustive_min_hampath, partitioned_hampath
from .tree import MultiscaleTree, TreeNode
from .regular2d import dd_sfc_2d
from .regular3d import dd_sfc_3d

__all__ = [
    "find_top_level_sfc",
    "find_best_entry",
    "refine",
    "sfc_multiscale",
    "reconstruct_to_grid",
]


def find_top_level_sfc(
    pyramid: ValuePyramid,
    alpha: float = 0.1,
    rng_seed: int = 0,
) -> Curve:
    """Curve over the coarsest pyramid cells.

    Uses the regular-grid data-driven generator when all dims are even and at
    least 2; otherwise a flexible Hamiltonian path from the lexicographically
    smallest cell, with the exit face chosen to minimize the path cost.
    """
    coarse = pyramid.coarsest
    dims = coarse.dims
    if all(d >= 2 and d % 2 == 0 for d in dims):
        if len(dims) == 2:
            return dd_sfc_2d(coarse, alpha=alpha)
        return dd_sfc_3d(coarse, alpha=alpha, rng_seed=rng_seed)
    v_s = (0,) * len(dims)
    if int(np.prod(dims)) == 1:
        return Curve([Step(v_s)], dims=dims, method="hampath")
    best: tuple[float, int, Curve] | None = None
    faces = [(axis, side) for axis in range(len(dims)) for side in (0, 1)]
    for i, face in enumerate(faces):
        problem = HamPathProblem.create(dims, coarse.values, v_s, face)
        try:
            curve, cost = partitioned_hampath(problem)
        except NoHamiltonianPath:
            continue
        if best is None or cost < best[0]:
            best = (cost, i, curve)
    if best is None:
        raise NoHamiltonianPath(f"no Hamiltonian path over the coarsest level {dims}")
    return best[2]


def _touch_face(prev: TreeNode, block: TreeNode) -> tuple[int, int]:
    """Face of ``block`` through which ``prev``'s box touches it: (axis, side)."""
    for axis in range(len(block.lo)):
        overlap = all(
            prev.lo[a] < block.hi[a] and block.lo[a] < prev.hi[a]
            for a in range(len(block.lo))
            if a != axis
        )
        if not overlap:
            continue
        if prev.hi[axis] == block.lo[axis]:
            return (axis, 0)
        if prev.lo[axis] == block.hi[axis]:
            return (axis, 1)
    raise ValueError(f"node {prev.id} does not touch block {block.id} through a face")


def _entry_candidates(
    v_last: TreeNode | None, block: TreeNode, tree: MultiscaleTree
) -> list[TreeNode]:
    """Children of ``block`` eligible as entry, best first.

    Preference goes to children on the face adjacent to ``v_last`` whose
    boxes touch it; when ``v_last`` is only corner-adjacent (possible after
    an exit-face fallback on clipped, odd-dims trees) every child is a
    candidate, still ordered by value difference.
    """
    children = sorted(tree.children_of(block), key=lambda c: c.lo)
    if v_last is None:
        return children
    out = []
    try:
        axis, side = _touch_face(v_last, block)
    except ValueError:
        axis = None
    if axis is not None:
        boundary = block.lo[axis] if side == 0 else block.hi[axis]
        for child in children:
            at_face = (child.lo[axis] == boundary) if side == 0 else (child.hi[axis] == boundary)
            if not at_face:
                continue
            touches = all(
                v_last.lo[a] < child.hi[a] and child.lo[a] < v_last.hi[a]
                for a in range(len(child.lo))
                if a != axis
            )
            if touches:
                out.append(child)
    if not out:
        out = list(children)
    out.sort(key=lambda c: (abs(c.value - v_last.value), c.lo))
    return out


def find_best_entry(
    v_last: TreeNode | None, block: TreeNode, tree: MultiscaleTree
) -> TreeNode:
    """Entry child of ``block``: the boundary child facing ``v_last`` whose
    aggregate value is closest to ``v_last``'s (ties by coordinate); the
    lexicographically smallest child at the sentinel start."""
    return _entry_candidates(v_last, block, tree)[0]


def _order_children(
    tree: MultiscaleTree,
    block: TreeNode,
    v_last: TreeNode | None,
    exit_face: tuple[int, int] | None,
) -> list[TreeNode]:
    """Order the children of an internal block by a Hamiltonian path on their
    index grid, honoring entry/exit; falls back over faces then entries."""
    children = sorted(tree.children_of(block), key=lambda c: c.lo)
    ndim = len(block.lo)
    index_of: dict[tuple[int, ...], TreeNode] = {}
    for child in children:
        idx = tuple(0 if child.lo[a] == block.lo[a] else 1 for a in range(ndim))
        index_of[idx] = child
    grid_dims = tuple(max(i[a] for i in index_of) + 1 for a in range(ndim))
    values = np.zeros(int(np.prod(grid_dims)))
    for idx, child in index_of.items():
        flat = 0
        for c, d in zip(reversed(idx), reversed(grid_dims)):
            flat = flat * d + c
        values[flat] = child.value

    hp_exit = exit_face
    if hp_exit is not None and grid_dims[hp_exit[0]] == 1:
        hp_exit = None  # every child touches the exit face

    entries = _entry_candidates(v_last, block, tree)
    face_options: list[tuple[int, int] | None] = [hp_exit]
    for axis in range(ndim):
        for side in (0, 1):
            if (axis, side) != hp_exit and grid_dims[axis] > 1:
                face_options.append((axis, side))
    if None not in face_options:
        face_options.append(None)

    for entry in entries:
        entry_idx = tuple(0 if entry.lo[a] == block.lo[a] else 1 for a in range(ndim))
        for face in face_options:
            problem = HamPathProblem.create(grid_dims, values, entry_idx, face)
            try:
                curve, _ = exhaustive_min_hampath(problem)
            except NoHamiltonianPath:
                continue
            return [index_of[s.coord] for s in curve.steps]
    raise NoHamiltonianPath(
        f"no child ordering for block {block.id} (entry/exit face infeasible)"
    )


def _face_between(cur: TreeNode, nxt: TreeNode) -> tuple[int, int]:
    """Exit face of ``cur`` toward the side-adjacent ``nxt``."""
    axis, side = _touch_face(cur, nxt)
    return (axis, 1 - side)


def _refine_nodes(
    tree: MultiscaleTree,
    block: TreeNode,
    v_last: TreeNode | None,
    exit_face: tuple[int, int] | None,
) -> list[TreeNode]:
    if block.is_leaf:
        return [block]
    ordered = _order_children(tree, block, v_last, exit_face)
    out: list[TreeNode] = []
    for k, child in enumerate(ordered):
        if k + 1 < len(ordered):
            child_exit = _face_between(child, ordered[k + 1])
        else:
            child_exit = exit_face
        frag = _refine_nodes(tree, child, v_last, child_exit)
        out.extend(frag)
        v_last = frag[-1]
    return out


def refine(
    pyramid: ValuePyramid,
    tree: MultiscaleTree,
    block: TreeNode,
    v_last: TreeNode | None = None,
    exit_face: tuple[int, int] | None = None,
) -> Curve:
    """Curve fragment visiting every leaf under ``block`` exactly once."""
    nodes = _refine_nodes(tree, block, v_last, exit_face)
    steps = [Step(coord=n.lo, level=n.level) for n in nodes]
    return Curve(steps, dims=tree.dims, method="oursms")


def sfc_multiscale(
    pyramid: ValuePyramid,
    tree: MultiscaleTree,
    alpha: float = 0.1,
    rng_seed: int = 0,
) -> Curve:
    """Concatenate refined fragments over the top-level curve, threading the
    last visited leaf between blocks."""
    if pyramid.finest.dims != tree.dims:
        raise TreeFormatError(
            f"tree domain {tree.dims} does not match pyramid {pyramid.finest.dims}"
        )
    top = find_top_level_sfc(pyramid, alpha=alpha, rng_seed=rng_seed)
    scale = 1 << (pyramid.num_levels - 1)
    blocks: list[TreeNode] = []
    seen: set[int] = set()
    for step in top.steps:
        lo = tuple(c * scale for c in step.coord)
        hi = tuple(min(l + scale, d) for l, d in zip(lo, tree.dims))
        node = tree.find_box(lo, hi)
        if node is None:
            raise TreeFormatError(
                f"tree holds no block for coarse cell {step.coord} (box {lo}..{hi})"
            )
        if node.id in seen:
            continue
        seen.add(node.id)
        blocks.append(node)

    steps: list[Step] = []
    v_last: TreeNode | None = None
    for i, block in enumerate(blocks):
        exit_face = _face_between(block, blocks[i + 1]) if i + 1 < len(blocks) else None
        nodes = _refine_nodes(tree, block, v_last, exit_face)
        steps.extend(Step(coord=n.lo, level=n.level) for n in nodes)
        v_last = nodes[-1]
    return Curve(steps, dims=tree.dims, method="oursms", alpha=alpha)


def reconstruct_to_grid(curve: Curve, tree: MultiscaleTree) -> ScalarField:
    """Paint each finest cell with the rank of the leaf covering it."""
    dims = tree.dims
    n = int(np.prod(dims))
    ranks = np.full(n, -1.0)

    def flat(coord):
        i = 0
        for c, d in zip(reversed(coord), reversed(dims)):
            i = i * d + c
        return i

    for rank, step in enumerate(curve.steps):
        leaf = tree.leaf_at(step.coord)
        if leaf.level != step.level or leaf.lo != step.coord:
            raise TreeFormatError(
                f"curve step {step.coord} (level {step.level}) does not match "
                f"leaf {leaf.lo} (level {leaf.level})"
            )
        ranges = [range(l, h) for l, h in zip(leaf.lo, leaf.hi)]
        if len(ranges) == 2:
            cells = [(x, y) for y in ranges[1] for x in ranges[0]]
        else:
            cells = [(x, y, z) for z in ranges[2] for y in ranges[1] for x in ranges[0]]
        for cell in cells:
            i = flat(cell)
            if ranks[i] >= 0:
                raise TreeFormatError(f"cell {cell} painted twice during reconstruction")
            ranks[i] = rank
    if np.any(ranks < 0):
        raise TreeFormatError("reconstruction left cells unassigned (leaves do not tile)")
    return ScalarField.from_values(dims, ranks)
