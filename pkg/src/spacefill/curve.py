"""Curve structures and the text curve-file format.

A curve is an ordered sequence of steps, each a grid coordinate plus a scale
level.  Regular-grid curves have all levels equal to 1 and consecutive steps
side-adjacent; multiscale curves step across leaves of mixed levels.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .validation import check_dims

__all__ = ["Step", "Curve", "write_curve", "read_curve"]


@dataclass(frozen=True)
class Step:
    coord: tuple[int, ...]
    level: int = 1


class Curve:
    """An ordered visit of cells/leaves plus the inverse coordinate->rank map."""

    def __init__(
        self,
        steps: Iterable[Step],
        dims: Sequence[int],
        method: str = "",
        alpha: float | None = None,
    ):
        self.steps: tuple[Step, ...] = tuple(steps)
        self.dims = check_dims(dims)
        self.method = method
        self.alpha = alpha
        self._rank: dict[tuple[int, ...], int] | None = None

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[Step]:
        return iter(self.steps)

    def __getitem__(self, i: int) -> Step:
        return self.steps[i]

    def coords(self) -> list[tuple[int, ...]]:
        return [s.coord for s in self.steps]

    def rank_of(self, coord: Sequence[int]) -> int:
        """Rank (position index) of the step anchored at ``coord``."""
        if self._rank is None:
            self._rank = {s.coord: i for i, s in enumerate(self.steps)}
        return self._rank[tuple(coord)]

    def is_cell_permutation(self) -> bool:
        """True when the steps visit every cell of ``dims`` exactly once."""
        expected = int(np.prod(self.dims))
        coords = {s.coord for s in self.steps}
        if len(self.steps) != expected or len(coords) != expected:
            return False
        return all(
            all(0 <= c < d for c, d in zip(s.coord, self.dims)) for s in self.steps
        )

    def steps_adjacent(self) -> bool:
        """True when every consecutive pair differs by one unit in one axis."""
        for a, b in zip(self.steps, self.steps[1:]):
            diff = [abs(x - y) for x, y in zip(a.coord, b.coord)]
            if sum(diff) != 1 or max(diff) != 1:
                return False
        return True

    @property
    def max_level(self) -> int:
        return max((s.level for s in self.steps), default=1)


def _format_alpha(alpha: float | None) -> str:
    return "na" if alpha is None else repr(float(alpha))


def write_curve(curve: Curve, path) -> Path:
    """Write one step per line: ``rank x y z level`` with a metadata header."""
    path = Path(path)
    dims_txt = "x".join(str(d) for d in curve.dims)
    lines = [f"# dims={dims_txt} method={curve.method} alpha={_format_alpha(curve.alpha)}"]
    for rank, step in enumerate(curve.steps):
        x, y = step.coord[0], step.coord[1]
        z = step.coord[2] if len(step.coord) == 3 else 0
        lines.append(f"{rank} {x} {y} {z} {step.level}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def read_curve(path) -> Curve:
    path = Path(path)
    lines = path.read_text().strip().splitlines()
    header = lines[0]
    if not header.startswith("#"):
        raise ValueError(f"curve file {path} lacks a header line")
    meta = dict(part.split("=", 1) for part in header[1:].split() if "=" in part)
    dims = tuple(int(d) for d in meta["dims"].split("x"))
    alpha = None if meta.get("alpha") in (None, "na") else float(meta["alpha"])
    steps = []
    for line in lines[1:]:
        rank, x, y, z, level = line.split()
        coord = (int(x), int(y)) if len(dims) == 2 else (int(x), int(y), int(z))
        steps.append(Step(coord=coord, level=int(level)))
    return Curve(steps, dims=dims, method=meta.get("method", ""), alpha=alpha)
