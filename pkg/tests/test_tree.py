import numpy as np
import pytest

from spacefill.errors import TreeFormatError
from spacefill.field import ScalarField, build_pyramid, max_pyramid_levels
from spacefill.tree import build_multiscale_tree, read_tree, write_tree


def make_pyramid(arr):
    field = ScalarField.from_array(np.asarray(arr, dtype=float))
    return build_pyramid(field, max_pyramid_levels(field.dims))


class TestBuildMultiscaleTree:
    def test_constant_field_single_leaf(self):
        tree = build_multiscale_tree(make_pyramid(np.ones((4, 4))), 0.5)
        assert tree.root.is_leaf
        assert tree.leaf_count() == 1

    def test_threshold_zero_fully_refines(self):
        rng = np.random.default_rng(0)
        tree = build_multiscale_tree(make_pyramid(rng.random((4, 4))), 0.0)
        assert tree.leaf_count() == 16
        assert all(leaf.level == 1 for leaf in tree.leaves())

    def test_quadrant_example_seven_leaves(self):
        # one quadrant holds 1,2,3,4 (variance 1.25), the rest zeros;
        # threshold between 0 and 1.25 gives 3 coarse + 4 fine leaves
        arr = np.zeros((4, 4))
        arr[2:, 2:] = [[1, 2], [3, 4]]
        tree = build_multiscale_tree(make_pyramid(arr), 0.5)
        assert tree.leaf_count() == 7
        levels = sorted(leaf.level for leaf in tree.leaves())
        assert levels == [1, 1, 1, 1, 2, 2, 2]

    def test_leaf_boxes_tile_domain(self):
        rng = np.random.default_rng(1)
        for dims in [(8, 8), (4, 8), (5, 7), (4, 4, 4)]:
            arr = rng.random(tuple(reversed(dims)))
            tree = build_multiscale_tree(make_pyramid(arr), 0.01)
            covered = np.zeros(tuple(reversed(dims)), dtype=int)
            for leaf in tree.leaves():
                sl = tuple(slice(l, h) for l, h in zip(reversed(leaf.lo), reversed(leaf.hi)))
                covered[sl] += 1
            assert covered.min() == 1 and covered.max() == 1

    def test_children_partition_parent(self):
        rng = np.random.default_rng(2)
        tree = build_multiscale_tree(make_pyramid(rng.random((8, 8))), 0.0)
        for node in tree.nodes:
            if node.is_leaf:
                continue
            area = sum(c.cell_count() for c in tree.children_of(node))
            assert area == node.cell_count()
            assert len(node.children) == 4

    def test_leaf_value_is_mean_of_cells(self):
        arr = np.arange(16.0).reshape(4, 4)
        tree = build_multiscale_tree(make_pyramid(arr), 1e9)
        assert tree.root.is_leaf
        assert tree.root.value == pytest.approx(arr.mean())

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValueError):
            build_multiscale_tree(make_pyramid(np.ones((4, 4))), -1.0)


class TestTreeFile:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(3)
        tree = build_multiscale_tree(make_pyramid(rng.random((8, 8))), 0.02)
        path = write_tree(tree, tmp_path / "tree.txt")
        again = read_tree(path)
        assert again.dims == tree.dims
        assert again.leaf_count() == tree.leaf_count()
        for a, b in zip(tree.nodes, again.nodes):
            assert (a.id, a.parent, a.level, a.lo, a.hi) == (b.id, b.parent, b.level, b.lo, b.hi)
            assert a.value == pytest.approx(b.value)
            assert a.is_leaf == b.is_leaf

    def test_2d_z_fields_zero(self, tmp_path):
        tree = build_multiscale_tree(make_pyramid(np.ones((2, 2))), 1.0)
        path = write_tree(tree, tmp_path / "tree.txt")
        parts = path.read_text().splitlines()[0].split()
        assert parts[5] == "0" and parts[8] == "0"

    def test_3d_round_trip(self, tmp_path):
        rng = np.random.default_rng(4)
        tree = build_multiscale_tree(make_pyramid(rng.random((4, 4, 4))), 0.01)
        again = read_tree(write_tree(tree, tmp_path / "tree.txt"))
        assert again.dims == (4, 4, 4)
        assert again.leaf_count() == tree.leaf_count()

    def test_missing_file(self, tmp_path):
        with pytest.raises(TreeFormatError):
            read_tree(tmp_path / "absent.txt")

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "tree.txt"
        path.write_text("0 -1 1 0 0\n")
        with pytest.raises(TreeFormatError, match="expected 11 fields"):
            read_tree(path)


class TestLeafLookup:
    def test_leaf_at_every_cell(self):
        rng = np.random.default_rng(5)
        tree = build_multiscale_tree(make_pyramid(rng.random((8, 8))), 0.02)
        for x in range(8):
            for y in range(8):
                leaf = tree.leaf_at((x, y))
                assert leaf.contains((x, y))

    def test_outside_domain(self):
        tree = build_multiscale_tree(make_pyramid(np.ones((4, 4))), 1.0)
        with pytest.raises(TreeFormatError):
            tree.leaf_at((4, 0))
