"""Bundled synthetic fields: disks, spheres, two blobs, and a tangle volume."""

from __future__ import annotations

import numpy as np

from .field import ScalarField

__all__ = [
    "disks_image",
    "sphere_volume",
    "two_blob_image",
    "tangle_volume",
    "builtin_dataset",
    "BUILTIN_DATASETS",
]


def disks_image(size: int = 64, n_disks: int = 5, seed: int = 7) -> ScalarField:
    """Randomly placed filled disks on a square image (overlaps add up)."""
    rng = np.random.default_rng(seed)
    ys, xs = np.mgrid[0:size, 0:size].astype(np.float64)
    img = np.zeros((size, size))
    for _ in range(n_disks):
        cx, cy = rng.uniform(0.15 * size, 0.85 * size, size=2)
        radius = rng.uniform(0.08 * size, 0.2 * size)
        img += ((xs - cx) ** 2 + (ys - cy) ** 2 <= radius**2).astype(np.float64)
    return ScalarField.from_array(img)


def sphere_volume(
    size: int = 16,
    center: tuple[float, float, float] | None = None,
    radius: float | None = None,
) -> ScalarField:
    """A sphere with values increasing from exterior to interior."""
    zs, ys, xs = np.mgrid[0:size, 0:size, 0:size].astype(np.float64)
    if center is None:
        center = ((size - 1) / 2.0,) * 3
    if radius is None:
        radius = size / 2.0
    cx, cy, cz = center
    r = np.sqrt((xs - cx) ** 2 + (ys - cy) ** 2 + (zs - cz) ** 2)
    vol = np.clip(1.0 - r / radius, 0.0, None)
    return ScalarField.from_array(vol)


def two_blob_image(size: int = 8) -> ScalarField:
    """Two Gaussian blobs in opposite corners."""
    ys, xs = np.mgrid[0:size, 0:size].astype(np.float64)
    sigma = size / 6.0
    c1 = size / 4.0 - 0.5
    c2 = 3.0 * size / 4.0 - 0.5
    img = np.exp(-((xs - c1) ** 2 + (ys - c1) ** 2) / (2 * sigma**2))
    img += np.exp(-((xs - c2) ** 2 + (ys - c2) ** 2) / (2 * sigma**2))
    return ScalarField.from_array(img)


def tangle_volume(size: int = 16) -> ScalarField:
    """The classic tangle polynomial sampled on a cube."""
    zs, ys, xs = np.mgrid[0:size, 0:size, 0:size].astype(np.float64)
    span = np.linspace(-2.5, 2.5, size)
    x, y, z = span[xs.astype(int)], span[ys.astype(int)], span[zs.astype(int)]
    vol = x**4 - 5 * x**2 + y**4 - 5 * y**2 + z**4 - 5 * z**2 + 11.8
    return ScalarField.from_array(vol)


BUILTIN_DATASETS = {
    "disk64": lambda: disks_image(64),
    "disk32": lambda: disks_image(32),
    "sphere16": lambda: sphere_volume(16),
    "sphere4": lambda: sphere_volume(4, center=(1.0, 1.0, 1.0), radius=2.0),
    "twoblob8": lambda: two_blob_image(8),
    "tangle16": lambda: tangle_volume(16),
}


def builtin_dataset(name: str) -> ScalarField:
    try:
        return BUILTIN_DATASETS[name]()
    except KeyError:
        raise KeyError(
            f"unknown builtin dataset {name!r}; available: {sorted(BUILTIN_DATASETS)}"
        ) from None
