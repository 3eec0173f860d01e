"""Input validation helpers used by the functional API and the estimators."""

from __future__ import annotations

from typing import Sequence

import numpy as np


def check_field_array(X, *, name: str = "X") -> np.ndarray:
    """Coerce ``X`` to a finite float64 array of 2 or 3 dimensions.

    Array axes are interpreted as ``(y, x)`` or ``(z, y, x)`` so that the
    flattened order runs x-fastest (C order).
    """
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim not in (2, 3):
        raise ValueError(f"{name} must be a 2D or 3D array, got ndim={arr.ndim}")
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return np.ascontiguousarray(arr)


def check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) not in (2, 3):
        raise ValueError(f"dims must have 2 or 3 entries, got {len(dims)}")
    if any(d < 1 for d in dims):
        raise ValueError(f"all dims must be >= 1, got {dims}")
    return dims


def check_even_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = check_dims(dims)
    if any(d % 2 != 0 for d in dims):
        raise ValueError(f"even dims required, got {dims}")
    return dims


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha


def check_block_size(block_size: Sequence[int], ndim: int) -> tuple[int, ...]:
    block = tuple(int(b) for b in block_size)
    if len(block) != ndim:
        raise ValueError(f"block_size must have {ndim} entries, got {len(block)}")
    if any(b < 1 for b in block):
        raise ValueError(f"block_size entries must be >= 1, got {block}")
    return block


def check_coord(coord: Sequence[int], dims: Sequence[int], *, name: str = "vertex") -> tuple[int, ...]:
    coord = tuple(int(c) for c in coord)
    if len(coord) != len(dims):
        raise ValueError(f"{name} {coord} does not match dimensionality {len(dims)}")
    if any(not 0 <= c < d for c, d in zip(coord, dims)):
        raise ValueError(f"{name} {coord} lies outside the box {tuple(dims)}")
    return coord
