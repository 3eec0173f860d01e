"""Registry mapping method names to curve generators, shared by CLI and eval."""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

from .baselines import hilbert_curve, morton_curve, scanline_curve
from .curve import Curve
from .field import ScalarField, ValuePyramid, build_pyramid, max_pyramid_levels, normalize_values
from .multiscale import sfc_multiscale
from .regular2d import dd_sfc_2d
from .regular3d import dd_sfc_3d
from .tree import MultiscaleTree, build_multiscale_tree, recompute_node_values

__all__ = ["METHOD_NAMES", "GeneratedCurve", "build_curve", "DEFAULT_SPLIT_THRESHOLD"]

METHOD_NAMES = ("ours2d", "ours3d", "oursms", "hilbert", "morton", "scanline")

# variance threshold on [0,1]-normalized values for auto-built trees
DEFAULT_SPLIT_THRESHOLD = 1e-3


@dataclass
class GeneratedCurve:
    curve: Curve
    tree: MultiscaleTree | None = None
    pyramid: ValuePyramid | None = None
    notes: dict = dataclass_field(default_factory=dict)


def default_block_size(ndim: int) -> tuple[int, ...]:
    return (8, 8) if ndim == 2 else (4, 4, 4)


def build_curve(
    method: str,
    field: ScalarField,
    *,
    alpha: float = 0.1,
    block_size=None,
    rng_seed: int = 0,
    tree: MultiscaleTree | None = None,
    split_threshold: float = DEFAULT_SPLIT_THRESHOLD,
) -> GeneratedCurve:
    """Generate a curve over ``field`` with the named method."""
    if method not in METHOD_NAMES:
        raise ValueError(f"unknown method {method!r}; valid methods: {', '.join(METHOD_NAMES)}")
    ndim = field.ndim
    if block_size is None:
        block_size = default_block_size(ndim)

    if method == "scanline":
        return GeneratedCurve(scanline_curve(field.dims))
    if method == "morton":
        return GeneratedCurve(morton_curve(field.dims))
    if method == "hilbert":
        return GeneratedCurve(hilbert_curve(field.dims))
    if method == "ours2d":
        if ndim != 2:
            raise ValueError(f"ours2d requires 2D data, got dims {field.dims}")
        return GeneratedCurve(dd_sfc_2d(field, alpha=alpha, block_size=block_size))
    if method == "ours3d":
        if ndim != 3:
            raise ValueError(f"ours3d requires 3D data, got dims {field.dims}")
        return GeneratedCurve(
            dd_sfc_3d(field, alpha=alpha, block_size=block_size, rng_seed=rng_seed)
        )

    # oursms
    normalized = normalize_values(field)
    pyramid = build_pyramid(normalized, max_pyramid_levels(field.dims))
    notes = {}
    if tree is None:
        tree = build_multiscale_tree(pyramid, split_threshold)
        notes["tree"] = f"auto-built with split_threshold={split_threshold}"
    else:
        recompute_node_values(tree, normalized)
        notes["tree"] = "caller-provided; node values recomputed on normalized data"
    curve = sfc_multiscale(pyramid, tree, alpha=alpha, rng_seed=rng_seed)
    return GeneratedCurve(curve, tree=tree, pyramid=pyramid, notes=notes)
