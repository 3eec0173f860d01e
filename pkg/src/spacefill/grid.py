"""Grid graphs over field cells: one vertex per cell, 4-/6-connectivity."""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .field import ScalarField
from .validation import check_dims

__all__ = ["GridGraph", "grid_graph_from_field"]

_AXIS_UNITS = ((1, 0), (0, 1)), ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def axis_units(ndim: int) -> tuple[tuple[int, ...], ...]:
    return _AXIS_UNITS[ndim - 2]


class GridGraph:
    """A box-shaped grid graph with per-vertex scale levels (all 1 here)."""

    def __init__(self, dims: Sequence[int]):
        self.dims = check_dims(dims)
        self.n = int(np.prod(self.dims))
        self.levels = np.ones(self.n, dtype=np.int64)
        self.levels.flags.writeable = False

    @property
    def ndim(self) -> int:
        return len(self.dims)

    def index(self, coord: Sequence[int]) -> int:
        idx = 0
        for c, d in zip(reversed(tuple(coord)), reversed(self.dims)):
            idx = idx * d + int(c)
        return idx

    def coord(self, index: int) -> tuple[int, ...]:
        out = []
        for d in self.dims:
            out.append(index % d)
            index //= d
        return tuple(out)

    def vertices(self) -> Iterator[tuple[int, ...]]:
        for i in range(self.n):
            yield self.coord(i)

    def neighbors(self, coord: Sequence[int]) -> list[tuple[int, ...]]:
        """Side-adjacent neighbor coordinates, in lexicographic order."""
        coord = tuple(coord)
        out = []
        for unit in axis_units(self.ndim):
            for sign in (-1, 1):
                cand = tuple(c + sign * u for c, u in zip(coord, unit))
                if all(0 <= c < d for c, d in zip(cand, self.dims)):
                    out.append(cand)
        out.sort()
        return out

    def degree(self, coord: Sequence[int]) -> int:
        return len(self.neighbors(coord))

    def num_edges(self) -> int:
        total = 0
        for axis, d in enumerate(self.dims):
            others = int(np.prod([n for a, n in enumerate(self.dims) if a != axis]))
            total += (d - 1) * others
        return total


def grid_graph_from_field(field: ScalarField) -> GridGraph:
    """One vertex per cell; 4-connectivity in 2D, 6-connectivity in 3D."""
    return GridGraph(field.dims)
