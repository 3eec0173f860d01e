"""Scikit-learn style estimators wrapping the curve generators.

``fit(X)`` learns a curve from a field (array shaped ``(ny, nx)`` or
``(nz, ny, nx)``); ``transform(X)`` linearizes a same-shaped field along the
fitted curve.  Fitting on one ensemble member and transforming the others is
the intended composition.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .baselines import hilbert_curve, morton_curve, scanline_curve
from .evaluate import linearize
from .field import ScalarField, build_pyramid, max_pyramid_levels, normalize_values
from .methods import DEFAULT_SPLIT_THRESHOLD
from .multiscale import reconstruct_to_grid, sfc_multiscale
from .regular2d import dd_sfc_2d
from .regular3d import dd_sfc_3d
from .tree import build_multiscale_tree
from .validation import check_field_array

__all__ = [
    "ScanlineCurve",
    "MortonCurve",
    "HilbertCurve",
    "DataDrivenCurve2D",
    "DataDrivenCurve3D",
    "MultiscaleCurve",
]


class _BaseCurveEstimator(TransformerMixin, BaseEstimator):
    """Shared fit/transform plumbing; subclasses implement ``_build``."""

    def _build(self, field: ScalarField):
        raise NotImplementedError

    def fit(self, X, y=None):
        field = ScalarField.from_array(check_field_array(X))
        self._fit_field(field)
        return self

    def _fit_field(self, field: ScalarField):
        self.dims_ = field.dims
        self.curve_ = self._build(field)

    def transform(self, X):
        if not hasattr(self, "curve_"):
            raise RuntimeError("this estimator is not fitted yet; call fit first")
        field = ScalarField.from_array(check_field_array(X))
        if field.dims != self.dims_:
            raise ValueError(f"X has dims {field.dims}, fitted on {self.dims_}")
        series = linearize(field, self.curve_, tree=getattr(self, "tree_", None))
        return series.values


class ScanlineCurve(_BaseCurveEstimator):
    """Row-major linearization (x fastest)."""

    def _build(self, field):
        return scanline_curve(field.dims)


class MortonCurve(_BaseCurveEstimator):
    """Bit-interleaved linearization; needs power-of-two dims."""

    def _build(self, field):
        return morton_curve(field.dims)


class HilbertCurve(_BaseCurveEstimator):
    """Hilbert linearization; needs equal power-of-two dims."""

    def _build(self, field):
        return hilbert_curve(field.dims)


class DataDrivenCurve2D(_BaseCurveEstimator):
    """Data-driven curve for 2D fields with even dims."""

    def __init__(self, alpha=0.1, block_size=(8, 8), cut_vertex=None):
        self.alpha = alpha
        self.block_size = block_size
        self.cut_vertex = cut_vertex

    def _build(self, field):
        return dd_sfc_2d(
            field, alpha=self.alpha, block_size=self.block_size, cut_vertex=self.cut_vertex
        )


class DataDrivenCurve3D(_BaseCurveEstimator):
    """Data-driven curve for 3D fields with even dims."""

    def __init__(self, alpha=0.1, block_size=(4, 4, 4), rng_seed=0, cut_vertex=None):
        self.alpha = alpha
        self.block_size = block_size
        self.rng_seed = rng_seed
        self.cut_vertex = cut_vertex

    def _build(self, field):
        return dd_sfc_3d(
            field,
            alpha=self.alpha,
            block_size=self.block_size,
            rng_seed=self.rng_seed,
            cut_vertex=self.cut_vertex,
        )


class MultiscaleCurve(_BaseCurveEstimator):
    """Adaptive quadtree/octree curve; exposes ``tree_`` and rank reconstruction."""

    def __init__(self, split_threshold=DEFAULT_SPLIT_THRESHOLD, alpha=0.1, rng_seed=0):
        self.split_threshold = split_threshold
        self.alpha = alpha
        self.rng_seed = rng_seed

    def _fit_field(self, field):
        normalized = normalize_values(field)
        pyramid = build_pyramid(normalized, max_pyramid_levels(field.dims))
        self.tree_ = build_multiscale_tree(pyramid, self.split_threshold)
        self.pyramid_ = pyramid
        self.dims_ = field.dims
        self.curve_ = sfc_multiscale(
            pyramid, self.tree_, alpha=self.alpha, rng_seed=self.rng_seed
        )

    def reconstruct_ranks(self) -> np.ndarray:
        """Rank of the covering leaf for every finest cell, shaped like the input."""
        if not hasattr(self, "curve_"):
            raise RuntimeError("this estimator is not fitted yet; call fit first")
        return reconstruct_to_grid(self.curve_, self.tree_).as_array()
