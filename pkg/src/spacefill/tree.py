"""Quadtrees/octrees over field domains, split by value variance.

Node boxes are half-open ``[lo, hi)`` ranges in finest-grid cells, anchored to
power-of-two cell boundaries so that tree levels line up with pyramid levels:
a node at level k nominally spans ``2**(k-1)`` cells per axis (clipped at the
domain boundary).  Leaves tile the domain exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import TreeFormatError
from .field import ScalarField, ValuePyramid

__all__ = ["TreeNode", "MultiscaleTree", "build_multiscale_tree", "write_tree", "read_tree"]


@dataclass
class TreeNode:
    id: int
    parent: int
    level: int
    lo: tuple[int, ...]
    hi: tuple[int, ...]
    value: float
    children: list[int] = dataclass_field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def extent(self) -> tuple[int, ...]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    def cell_count(self) -> int:
        return int(np.prod(self.extent))

    def contains(self, coord: Sequence[int]) -> bool:
        return all(l <= c < h for c, l, h in zip(coord, self.lo, self.hi))


class MultiscaleTree:
    """A quadtree/octree whose leaves carry aggregated values."""

    def __init__(self, nodes: list[TreeNode], dims: Sequence[int]):
        self.nodes = nodes
        self.dims = tuple(int(d) for d in dims)
        if not nodes:
            raise TreeFormatError("a tree needs at least a root node")

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    @property
    def ndim(self) -> int:
        return len(self.dims)

    def node(self, node_id: int) -> TreeNode:
        return self.nodes[node_id]

    def children_of(self, node: TreeNode) -> list[TreeNode]:
        return [self.nodes[c] for c in node.children]

    def leaves(self) -> Iterator[TreeNode]:
        """All leaves in deterministic pre-order (children sorted by box origin)."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                yield node
            else:
                kids = sorted(self.children_of(node), key=lambda c: c.lo[::-1])
                stack.extend(reversed(kids))

    def leaf_count(self) -> int:
        return sum(1 for _ in self.leaves())

    def leaf_at(self, coord: Sequence[int]) -> TreeNode:
        node = self.root
        coord = tuple(coord)
        if not node.contains(coord):
            raise TreeFormatError(f"coordinate {coord} outside tree domain {self.dims}")
        while not node.is_leaf:
            for child in self.children_of(node):
                if child.contains(coord):
                    node = child
                    break
            else:
                raise TreeFormatError(f"children of node {node.id} do not cover {coord}")
        return node

    def find_box(self, lo: Sequence[int], hi: Sequence[int]) -> TreeNode | None:
        """Deepest node whose box equals ``[lo, hi)``, or the leaf covering it."""
        lo, hi = tuple(lo), tuple(hi)
        node = self.root
        while True:
            if node.lo == lo and node.hi == hi:
                return node
            if node.is_leaf:
                return node if all(
                    nl <= l and h <= nh
                    for l, h, nl, nh in zip(lo, hi, node.lo, node.hi)
                ) else None
            advanced = False
            for child in self.children_of(node):
                if all(cl <= l and h <= ch for l, h, cl, ch in zip(lo, hi, child.lo, child.hi)):
                    node = child
                    advanced = True
                    break
            if not advanced:
                return None


class _BoxStats:
    """O(1) box sums over the finest field via integral images."""

    def __init__(self, field: ScalarField):
        arr = field.as_array()
        self._sums = self._integral(arr)
        self._sqs = self._integral(arr * arr)
        self.ndim = arr.ndim

    @staticmethod
    def _integral(arr: np.ndarray) -> np.ndarray:
        out = arr
        for axis in range(arr.ndim):
            out = np.cumsum(out, axis=axis)
        pad = [(1, 0)] * arr.ndim
        return np.pad(out, pad)

    def _box_sum(self, table: np.ndarray, lo, hi) -> float:
        # lo/hi are (x, y[, z]); integral tables are indexed (z, y, x).
        lo_r, hi_r = lo[::-1], hi[::-1]
        total = 0.0
        for mask in range(1 << self.ndim):
            idx = []
            bits = 0
            for axis in range(self.ndim):
                if mask & (1 << axis):
                    idx.append(lo_r[axis])
                    bits += 1
                else:
                    idx.append(hi_r[axis])
            total += (-1) ** bits * table[tuple(idx)]
        return float(total)

    def mean(self, lo, hi) -> float:
        count = int(np.prod([h - l for l, h in zip(lo, hi)]))
        return self._box_sum(self._sums, lo, hi) / count

    def variance(self, lo, hi) -> float:
        count = int(np.prod([h - l for l, h in zip(lo, hi)]))
        s = self._box_sum(self._sums, lo, hi)
        sq = self._box_sum(self._sqs, lo, hi)
        return max(sq / count - (s / count) ** 2, 0.0)


def _split_box(lo: tuple[int, ...], hi: tuple[int, ...], level: int):
    """Split a level-``level`` box into the level-1-lower cells covering it."""
    half = 1 << (level - 2)
    pieces_per_axis = []
    for l, h in zip(lo, hi):
        anchor = (l // (2 * half)) * (2 * half)
        mid = anchor + half
        if l < mid < h:
            pieces_per_axis.append([(l, mid), (mid, h)])
        else:
            pieces_per_axis.append([(l, h)])
    boxes = [((), ())]
    for axis_pieces in pieces_per_axis:
        boxes = [
            (blo + (p0,), bhi + (p1,))
            for blo, bhi in boxes
            for p0, p1 in axis_pieces
        ]
    return boxes


def build_multiscale_tree(pyramid: ValuePyramid, split_threshold: float) -> MultiscaleTree:
    """Refine wherever the value variance of a node's finest cells exceeds the threshold.

    The root covers the whole domain at the pyramid's coarsest level; a node
    splits iff its variance exceeds ``split_threshold`` and its level is above
    1 (and its box spans more than one cell).  Leaf values are means of the
    covered finest cells.
    """
    if split_threshold < 0:
        raise ValueError(f"split_threshold must be >= 0, got {split_threshold}")
    finest = pyramid.finest
    stats = _BoxStats(finest)
    root_level = pyramid.num_levels
    dims = finest.dims
    lo0 = (0,) * len(dims)
    nodes: list[TreeNode] = [
        TreeNode(id=0, parent=-1, level=root_level, lo=lo0, hi=dims, value=stats.mean(lo0, dims))
    ]
    queue = [0]
    while queue:
        nid = queue.pop(0)
        node = nodes[nid]
        if node.level <= 1 or node.cell_count() <= 1:
            continue
        if stats.variance(node.lo, node.hi) <= split_threshold:
            continue
        boxes = _split_box(node.lo, node.hi, node.level)
        if len(boxes) == 1:
            continue
        for blo, bhi in boxes:
            child = TreeNode(
                id=len(nodes),
                parent=nid,
                level=node.level - 1,
                lo=blo,
                hi=bhi,
                value=stats.mean(blo, bhi),
            )
            nodes.append(child)
            node.children.append(child.id)
            queue.append(child.id)
    return MultiscaleTree(nodes, dims)


def write_tree(tree: MultiscaleTree, path) -> Path:
    """One node per line: ``id parent_id level x0 y0 z0 x1 y1 z1 value is_leaf``.

    Box ends are exclusive; z fields are written as 0 for 2D trees.
    """
    path = Path(path)
    lines = []
    for node in tree.nodes:
        lo = node.lo + (0,) * (3 - len(node.lo))
        hi = node.hi + (0,) * (3 - len(node.hi))
        lines.append(
            f"{node.id} {node.parent} {node.level} "
            f"{lo[0]} {lo[1]} {lo[2]} {hi[0]} {hi[1]} {hi[2]} "
            f"{node.value!r} {1 if node.is_leaf else 0}"
        )
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def read_tree(path) -> MultiscaleTree:
    path = Path(path)
    if not path.is_file():
        raise TreeFormatError(f"tree file not found: {path}")
    raw_nodes: dict[int, TreeNode] = {}
    leaf_flags: dict[int, bool] = {}
    for line_no, line in enumerate(path.read_text().strip().splitlines(), start=1):
        parts = line.split()
        if len(parts) != 11:
            raise TreeFormatError(f"{path}:{line_no}: expected 11 fields, got {len(parts)}")
        nid, parent, level = int(parts[0]), int(parts[1]), int(parts[2])
        lo3 = tuple(int(p) for p in parts[3:6])
        hi3 = tuple(int(p) for p in parts[6:9])
        value, is_leaf = float(parts[9]), bool(int(parts[10]))
        ndim = 2 if hi3[2] == 0 else 3
        raw_nodes[nid] = TreeNode(
            id=nid, parent=parent, level=level, lo=lo3[:ndim], hi=hi3[:ndim], value=value
        )
        leaf_flags[nid] = is_leaf
    if not raw_nodes:
        raise TreeFormatError(f"tree file {path} is empty")
    ordered = [raw_nodes[k] for k in sorted(raw_nodes)]
    remap = {node.id: i for i, node in enumerate(ordered)}
    root = None
    for node in ordered:
        node.id = remap[node.id]
        if node.parent < 0:
            root = node
        else:
            node.parent = remap[node.parent]
            ordered[node.parent].children.append(node.id)
    if root is None:
        raise TreeFormatError(f"tree file {path} lacks a root (parent_id -1)")
    if root.id != 0:
        raise TreeFormatError(f"tree file {path}: root must have the smallest id")
    for node in ordered:
        if leaf_flags[node.id] != node.is_leaf:
            raise TreeFormatError(f"tree file {path}: node {node.id} leaf flag inconsistent")
    return MultiscaleTree(ordered, root.hi)


def recompute_node_values(tree: MultiscaleTree, field: ScalarField) -> None:
    """Refresh every node's aggregate as the mean of its finest cells in ``field``."""
    stats = _BoxStats(field)
    for node in tree.nodes:
        node.value = stats.mean(node.lo, node.hi)
