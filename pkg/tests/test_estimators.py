import numpy as np
import pytest
from sklearn.base import clone

from spacefill.estimators import (
    DataDrivenCurve2D,
    DataDrivenCurve3D,
    HilbertCurve,
    MortonCurve,
    MultiscaleCurve,
    ScanlineCurve,
)


@pytest.fixture
def image():
    rng = np.random.default_rng(0)
    return rng.random((8, 8))


@pytest.fixture
def volume():
    rng = np.random.default_rng(1)
    return rng.random((4, 4, 4))


class TestSklearnProtocol:
    def test_get_params(self):
        est = DataDrivenCurve2D(alpha=0.3, block_size=(4, 4))
        params = est.get_params()
        assert params["alpha"] == 0.3
        assert params["block_size"] == (4, 4)

    def test_set_params(self):
        est = DataDrivenCurve2D().set_params(alpha=0.7)
        assert est.alpha == 0.7

    def test_clone(self, image):
        est = DataDrivenCurve2D(alpha=0.2)
        est.fit(image)
        cloned = clone(est)
        assert cloned.alpha == 0.2
        assert not hasattr(cloned, "curve_")

    def test_fit_returns_self(self, image):
        est = ScanlineCurve()
        assert est.fit(image) is est

    def test_fit_transform(self, image):
        u = ScanlineCurve().fit_transform(image)
        assert u.tolist() == image.ravel().tolist()


class TestTransform:
    def test_transform_matches_curve(self, image):
        est = DataDrivenCurve2D().fit(image)
        u = est.transform(image)
        expected = [image[y, x] for x, y in est.curve_.coords()]
        assert u.tolist() == expected

    def test_transform_other_member(self, image):
        rng = np.random.default_rng(2)
        other = rng.random(image.shape)
        est = HilbertCurve().fit(image)
        u = est.transform(other)
        assert u.tolist() == [other[y, x] for x, y in est.curve_.coords()]

    def test_unfitted_raises(self, image):
        with pytest.raises(RuntimeError, match="not fitted"):
            ScanlineCurve().transform(image)

    def test_dims_mismatch(self, image):
        est = ScanlineCurve().fit(image)
        with pytest.raises(ValueError, match="dims"):
            est.transform(np.zeros((4, 4)))

    def test_3d(self, volume):
        est = DataDrivenCurve3D(rng_seed=3).fit(volume)
        assert est.curve_.is_cell_permutation()
        u = est.transform(volume)
        assert len(u) == 64

    def test_morton_pow2_check(self):
        with pytest.raises(ValueError):
            MortonCurve().fit(np.zeros((3, 3)))


class TestMultiscaleEstimator:
    def test_tree_and_ranks(self, image):
        est = MultiscaleCurve(split_threshold=0.02).fit(image)
        assert hasattr(est, "tree_")
        ranks = est.reconstruct_ranks()
        assert ranks.shape == image.shape
        assert len(np.unique(ranks)) == est.tree_.leaf_count()

    def test_transform_length(self, image):
        est = MultiscaleCurve(split_threshold=0.02).fit(image)
        u = est.transform(image)
        assert len(u) == est.tree_.leaf_count()

    def test_validation_errors(self):
        with pytest.raises(ValueError, match="2D or 3D"):
            ScanlineCurve().fit(np.zeros(5))
        with pytest.raises(ValueError, match="non-finite"):
            ScanlineCurve().fit(np.full((2, 2), np.nan))
