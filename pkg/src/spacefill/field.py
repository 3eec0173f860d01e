"""Scalar fields, value pyramids, and descriptor-file IO.

A field stores its samples as a flat float64 array in row-major order with x
fastest, then y, then z.  ``dims`` lists the extent per axis as ``(nx, ny)``
or ``(nx, ny, nz)``.  All types here are immutable after construction and
safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import FieldFormatError
from .validation import check_dims

__all__ = [
    "ScalarField",
    "ValuePyramid",
    "load_scalar_field",
    "write_scalar_field",
    "normalize_values",
    "build_pyramid",
]


@dataclass(frozen=True)
class ScalarField:
    """A dense 2D/3D scalar field on a regular grid."""

    dims: tuple[int, ...]
    values: np.ndarray
    value_range: tuple[float, float]

    @classmethod
    def from_values(cls, dims: Sequence[int], values) -> "ScalarField":
        dims = check_dims(dims)
        flat = np.asarray(values, dtype=np.float64).ravel()
        expected = int(np.prod(dims))
        if flat.size != expected:
            raise FieldFormatError(
                f"size mismatch: dims {dims} imply {expected} values, got {flat.size}"
            )
        flat = flat.copy()
        flat.flags.writeable = False
        vmin, vmax = float(flat.min()), float(flat.max())
        return cls(dims=dims, values=flat, value_range=(vmin, vmax))

    @classmethod
    def from_array(cls, arr) -> "ScalarField":
        """Build from an array shaped ``(ny, nx)`` or ``(nz, ny, nx)``."""
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim not in (2, 3):
            raise FieldFormatError(f"expected a 2D or 3D array, got ndim={arr.ndim}")
        dims = tuple(int(n) for n in arr.shape[::-1])
        return cls.from_values(dims, arr.ravel())

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return int(self.values.size)

    def as_array(self) -> np.ndarray:
        """View the samples as an array shaped ``(ny, nx)`` or ``(nz, ny, nx)``."""
        return self.values.reshape(self.dims[::-1])

    def index(self, coord: Sequence[int]) -> int:
        idx = 0
        for c, d in zip(reversed(tuple(coord)), reversed(self.dims)):
            idx = idx * d + int(c)
        return idx

    def value_at(self, coord: Sequence[int]) -> float:
        return float(self.values[self.index(coord)])


@dataclass(frozen=True)
class ValuePyramid:
    """A stack of progressively coarsened fields; ``levels[0]`` is the finest."""

    levels: tuple[ScalarField, ...]
    reduction: str = "mean"

    @property
    def num_levels(self) -> int:
        return len(self.levels)

    @property
    def finest(self) -> ScalarField:
        return self.levels[0]

    @property
    def coarsest(self) -> ScalarField:
        return self.levels[-1]

    def level(self, k: int) -> ScalarField:
        """Return the field at 1-based level ``k`` (1 = finest)."""
        return self.levels[k - 1]


def load_scalar_field(descriptor_path) -> ScalarField:
    """Load a field from a JSON descriptor referencing a raw little-endian f32 file.

    The descriptor must carry ``dims`` (x, y[, z] extents) and ``data`` (path
    to the raw file, relative to the descriptor).  ``dtype``, ``order``, and
    ``endianness`` are validated when present; only ``f32`` row-major
    little-endian data is supported.
    """
    path = Path(descriptor_path)
    if not path.is_file():
        raise FieldFormatError(f"descriptor not found: {path}")
    try:
        descriptor = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FieldFormatError(f"unparseable descriptor {path}: {exc}") from exc
    if not isinstance(descriptor, dict) or "dims" not in descriptor or "data" not in descriptor:
        raise FieldFormatError(f"descriptor {path} must define 'dims' and 'data'")
    if descriptor.get("dtype", "f32") != "f32":
        raise FieldFormatError(f"unsupported dtype {descriptor['dtype']!r} (only 'f32')")
    if descriptor.get("order", "row-major") != "row-major":
        raise FieldFormatError(f"unsupported order {descriptor['order']!r}")
    if descriptor.get("endianness", "little") != "little":
        raise FieldFormatError(f"unsupported endianness {descriptor['endianness']!r}")
    try:
        dims = check_dims(descriptor["dims"])
    except ValueError as exc:
        raise FieldFormatError(str(exc)) from exc
    raw_path = (path.parent / descriptor["data"]).resolve()
    if not raw_path.is_file():
        raise FieldFormatError(f"raw data file not found: {raw_path}")
    raw = np.fromfile(raw_path, dtype="<f4").astype(np.float64)
    if raw.size != int(np.prod(dims)):
        raise FieldFormatError(
            f"size mismatch: dims {dims} imply {int(np.prod(dims))} values, "
            f"raw file holds {raw.size}"
        )
    if not np.all(np.isfinite(raw)):
        raise FieldFormatError(f"raw data file {raw_path} contains non-finite samples")
    return ScalarField.from_values(dims, raw)


def write_scalar_field(field: ScalarField, descriptor_path, raw_name: str | None = None) -> Path:
    """Write ``field`` as a descriptor plus raw f32 file next to it."""
    path = Path(descriptor_path)
    if raw_name is None:
        raw_name = path.stem + ".raw"
    raw_path = path.parent / raw_name
    path.parent.mkdir(parents=True, exist_ok=True)
    field.values.astype("<f4").tofile(raw_path)
    descriptor = {
        "dims": list(field.dims),
        "dtype": "f32",
        "order": "row-major",
        "endianness": "little",
        "data": raw_name,
    }
    path.write_text(json.dumps(descriptor, indent=2, sort_keys=True) + "\n")
    return path


def normalize_values(field: ScalarField) -> ScalarField:
    """Affinely map samples to [0, 1]; constant fields map to all zeros."""
    if not np.all(np.isfinite(field.values)):
        raise ValueError("field contains non-finite samples")
    vmin, vmax = field.value_range
    if vmax > vmin:
        scaled = (field.values - vmin) / (vmax - vmin)
    else:
        scaled = np.zeros_like(field.values)
    return ScalarField.from_values(field.dims, scaled)


def _halve(arr: np.ndarray) -> np.ndarray:
    """Mean-pool an array by 2 along every axis, edge-replicating odd axes."""
    pads = [(0, n % 2) for n in arr.shape]
    if any(p[1] for p in pads):
        arr = np.pad(arr, pads, mode="edge")
    if arr.ndim == 2:
        ny, nx = arr.shape
        return arr.reshape(ny // 2, 2, nx // 2, 2).mean(axis=(1, 3))
    nz, ny, nx = arr.shape
    return arr.reshape(nz // 2, 2, ny // 2, 2, nx // 2, 2).mean(axis=(1, 3, 5))


def build_pyramid(field: ScalarField, num_levels: int) -> ValuePyramid:
    """Build a mean-reduction pyramid of ``num_levels`` levels (level 1 = input).

    Every coarser level halves each dimension, rounding up; odd extents are
    padded by edge replication before pooling.  Raises when ``num_levels``
    exceeds the number of times the field can be halved.
    """
    num_levels = int(num_levels)
    if num_levels < 1:
        raise ValueError(f"num_levels must be >= 1, got {num_levels}")
    levels = [field]
    arr = field.as_array()
    for _ in range(num_levels - 1):
        if all(n == 1 for n in arr.shape):
            raise ValueError(
                f"num_levels={num_levels} too large for dims {field.dims}: "
                "coarsest level already 1 cell per axis"
            )
        arr = _halve(arr)
        levels.append(ScalarField.from_array(arr))
    return ValuePyramid(levels=tuple(levels))


def max_pyramid_levels(dims: Sequence[int]) -> int:
    """Number of pyramid levels until every axis reaches extent 1."""
    levels = 1
    sizes = list(dims)
    while any(n > 1 for n in sizes):
        sizes = [(n + 1) // 2 for n in sizes]
        levels += 1
    return levels
