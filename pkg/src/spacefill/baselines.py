"""Reference linearizations: Hilbert, Morton (bit interleave), and scanline.

Hilbert orientation is frozen to the classic iterative quadrant recursion:
the order-1 curve is (0,0),(0,1),(1,1),(1,0) (first step toward +y) and the
order-2 endpoints are (0,0) and (n-1,0); higher orders follow from the same
recursion.  The 3D curve uses a Gray-code traversal with axes permuted so the
first step from the origin is toward +y.
"""

from __future__ import annotations

from typing import Sequence

from .curve import Curve, Step
from .validation import check_dims

__all__ = ["hilbert_curve", "morton_curve", "scanline_curve"]


def _require_pow2(dims: tuple[int, ...]) -> None:
    for d in dims:
        if d & (d - 1) != 0:
            raise ValueError(f"power-of-two dims required, got {dims}")


def _hilbert_d2xy(n: int, d: int) -> tuple[int, int]:
    rx = ry = 0
    x = y = 0
    t = d
    s = 1
    while s < n:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        if ry == 0:
            if rx == 1:
                x = s - 1 - x
                y = s - 1 - y
            x, y = y, x
        x += s * rx
        y += s * ry
        t //= 4
        s *= 2
    return x, y


def _gray_encode(n: int) -> int:
    return n ^ (n >> 1)


def _gray_encode_travel(start: int, end: int, mask: int, i: int) -> int:
    travel_bit = start ^ end
    modulus = mask + 1
    g = _gray_encode(i) * (travel_bit * 2)
    return ((g | (g // modulus)) & mask) ^ start


def _child_start_end(start: int, end: int, mask: int, i: int) -> tuple[int, int]:
    start_i = max(0, (i - 1) & ~1)
    end_i = min(mask, (i + 1) | 1)
    return (
        _gray_encode_travel(start, end, mask, start_i),
        _gray_encode_travel(start, end, mask, end_i),
    )


def _hilbert_point_3d(index: int, order: int) -> tuple[int, int, int]:
    ndim = 3
    mask = (1 << ndim) - 1
    start, end = 0, 1 << ((-order - 1) % ndim)
    coords = [0, 0, 0]
    for j in range(order):
        chunk = (index >> (ndim * (order - 1 - j))) & mask
        g = _gray_encode_travel(start, end, mask, chunk)
        # chunk bits pack x highest, z lowest
        for axis in range(ndim):
            coords[axis] = (coords[axis] << 1) | ((g >> (ndim - 1 - axis)) & 1)
        start, end = _child_start_end(start, end, mask, chunk)
    return coords[0], coords[1], coords[2]


def hilbert_curve(dims: Sequence[int], dimensionality: int | None = None) -> Curve:
    """Hilbert traversal of a square/cubic power-of-two domain."""
    dims = check_dims(dims)
    if dimensionality is not None and dimensionality != len(dims):
        raise ValueError(f"dimensionality {dimensionality} does not match dims {dims}")
    if len(set(dims)) != 1:
        raise ValueError(f"all dims must be equal for the Hilbert curve, got {dims}")
    _require_pow2(dims)
    n = dims[0]
    total = n ** len(dims)
    if len(dims) == 2:
        steps = [Step(_hilbert_d2xy(n, d)) for d in range(total)]
    else:
        order = max(1, (n - 1).bit_length())
        # permute axes so the first step from the origin goes toward +y
        steps = []
        for d in range(total):
            hx, hy, hz = _hilbert_point_3d(d, order)
            steps.append(Step((hy, hx, hz)))
    return Curve(steps, dims=dims, method="hilbert")


def morton_curve(dims: Sequence[int]) -> Curve:
    """Bit-interleaved order with x least significant."""
    dims = check_dims(dims)
    _require_pow2(dims)
    bits = [max(0, (d - 1).bit_length()) for d in dims]
    ndim = len(dims)

    def code(coord: tuple[int, ...]) -> int:
        out = 0
        pos = 0
        for b in range(max(bits)):
            for axis in range(ndim):
                if b < bits[axis]:
                    out |= ((coord[axis] >> b) & 1) << pos
                    pos += 1
        return out

    coords = _all_coords(dims)
    coords.sort(key=code)
    return Curve([Step(c) for c in coords], dims=dims, method="morton")


def scanline_curve(dims: Sequence[int]) -> Curve:
    """Row-major order: x fastest, then y, then z."""
    dims = check_dims(dims)
    return Curve([Step(c) for c in _all_coords(dims)], dims=dims, method="scanline")


def _all_coords(dims: tuple[int, ...]) -> list[tuple[int, ...]]:
    if len(dims) == 2:
        nx, ny = dims
        return [(x, y) for y in range(ny) for x in range(nx)]
    nx, ny, nz = dims
    return [(x, y, z) for z in range(nz) for y in range(ny) for x in range(nx)]
