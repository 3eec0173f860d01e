import itertools
import math

import numpy as np
import pytest

from spacefill.errors import CycleAssociationError
from spacefill.field import ScalarField, normalize_values
from spacefill.grid import grid_graph_from_field
from spacefill.regular2d import CircuitDualGraph
from spacefill.regular3d import (
    CUBE_CYCLE_CONFIGS,
    assign_cycle_configs,
    associate_cycles,
    build_cube_dual_graph,
    dd_sfc_3d,
    position_weight_3d,
    value_weight_3d,
    _ordered_cycle,
)


def make_field(dims, values=None):
    if values is None:
        values = np.zeros(int(np.prod(dims)))
    return ScalarField.from_values(dims, values)


def config_cycle_at(config, cube):
    base = tuple(2 * c for c in cube)
    edges = [
        tuple(
            sorted(
                (
                    tuple(b + o for b, o in zip(base, ea)),
                    tuple(b + o for b, o in zip(base, eb)),
                )
            )
        )
        for ea, eb in config.edges
    ]
    return _ordered_cycle(edges)


def is_valid_cycle(vertices, expected_set):
    if set(vertices) != expected_set or len(vertices) != len(expected_set):
        return False
    ring = list(vertices) + [vertices[0]]
    for a, b in zip(ring, ring[1:]):
        if sum(abs(x - y) for x, y in zip(a, b)) != 1:
            return False
    return True


class TestConfigs:
    def test_exactly_six(self):
        assert len(CUBE_CYCLE_CONFIGS) == 6

    def test_each_is_an_eight_cycle(self):
        for config in CUBE_CYCLE_CONFIGS:
            ring = config_cycle_at(config, (0, 0, 0))
            expected = set(itertools.product((0, 1), repeat=3))
            assert is_valid_cycle(ring, expected)

    def test_edge_sets_distinct(self):
        seen = {frozenset(c.edges) for c in CUBE_CYCLE_CONFIGS}
        assert len(seen) == 6


class TestValueWeight3D:
    def test_constant_zero(self):
        field = make_field((4, 2, 2), np.ones(16))
        assert value_weight_3d(field, (0, 0, 0), (1, 0, 0)) == 0.0

    def test_step_patch_hand_value(self):
        # C_i all zeros, C_j all ones along x: interior and facing-plane
        # differences vanish; the four crossing pairs each differ by 1:
        # N = 0 + 0 + mean(1,1,1,1) - 0 - 0 = 1
        arr = np.zeros((2, 2, 4))
        arr[:, :, 2:] = 1.0
        field = ScalarField.from_array(arr)
        assert value_weight_3d(field, (0, 0, 0), (1, 0, 0)) == pytest.approx(1.0)

    def test_perpendicular_relabel_invariance(self):
        # transposing the two perpendicular axes (with the data) keeps N
        rng = np.random.default_rng(0)
        for _ in range(20):
            arr = rng.random((2, 2, 4))  # (z, y, x)
            field = ScalarField.from_array(arr)
            swapped = ScalarField.from_array(arr.swapaxes(0, 1))
            w1 = value_weight_3d(field, (0, 0, 0), (1, 0, 0))
            w2 = value_weight_3d(swapped, (0, 0, 0), (1, 0, 0))
            assert w1 == pytest.approx(w2)

    def test_role_symmetric(self):
        rng = np.random.default_rng(1)
        field = make_field((4, 2, 2), rng.random(16))
        assert value_weight_3d(field, (0, 0, 0), (1, 0, 0)) == pytest.approx(
            value_weight_3d(field, (1, 0, 0), (0, 0, 0))
        )

    def test_non_adjacent_rejected(self):
        field = make_field((8, 8, 8))
        with pytest.raises(ValueError):
            value_weight_3d(field, (0, 0, 0), (1, 1, 0))


class TestPositionWeight3D:
    def test_cube_at_center(self):
        dual = CircuitDualGraph((3, 3, 3), (3, 3, 3))
        assert position_weight_3d((1, 1, 1), dual) == 0.0

    def test_corner_bounded_by_one(self):
        dual = CircuitDualGraph((4, 4, 4), (4, 4, 4))
        for cube in dual.circuits():
            assert 0.0 <= position_weight_3d(cube, dual) <= 1.0

    def test_hand_value(self):
        # centroid of cubes 0..3 per axis is 1.5; cube (1,1,1) sits
        # sqrt(0.75) away; half block diagonal is sqrt(48)/2
        dual = CircuitDualGraph((4, 4, 4), (4, 4, 4))
        expected = math.sqrt(0.75) / (math.sqrt(48) / 2)
        assert position_weight_3d((1, 1, 1), dual) == pytest.approx(expected)
        assert position_weight_3d((1, 1, 1), dual) == pytest.approx(0.25)


class TestAssignConfigs:
    def mst_over(self, dims_dual):
        cubes = list(itertools.product(*[range(d) for d in dims_dual]))
        return [(cubes[i - 1], cubes[i]) for i in range(1, len(cubes))]

    def test_same_seed_same_assignment(self):
        mst = self.mst_over((2, 2, 2))
        assert assign_cycle_configs(mst, 7) == assign_cycle_configs(mst, 7)

    def test_different_seed_differs(self):
        mst = self.mst_over((4, 4, 4))
        a = assign_cycle_configs(mst, 1)
        b = assign_cycle_configs(mst, 2)
        assert any(a[c].config_id != b[c].config_id for c in a)

    def test_frequencies_near_uniform(self):
        # ~1/6 +- 0.05 over 10^4 draws
        mst = self.mst_over((22, 22, 22))  # 10648 cubes
        assigned = assign_cycle_configs(mst, 123)
        counts = np.zeros(6)
        for config in assigned.values():
            counts[config.config_id] += 1
        freqs = counts / counts.sum()
        assert np.all(np.abs(freqs - 1 / 6) < 0.05)

    def test_all_assignments_valid_cycles(self):
        mst = self.mst_over((2, 2, 2))
        for cube, config in assign_cycle_configs(mst, 5).items():
            ring = config_cycle_at(config, cube)
            base = tuple(2 * c for c in cube)
            expected = {
                tuple(b + o for b, o in zip(base, off))
                for off in itertools.product((0, 1), repeat=3)
            }
            assert is_valid_cycle(ring, expected)


class TestAssociateCycles:
    def all_pairs(self):
        for ca in CUBE_CYCLE_CONFIGS:
            for cb in CUBE_CYCLE_CONFIGS:
                yield ca, cb

    def test_every_config_pair_merges_to_16_cycle(self):
        cube_a, cube_b = (0, 0, 0), (1, 0, 0)
        expected = {
            tuple(2 * c + o for c, o in zip(cube_a, off))
            for off in itertools.product((0, 1), repeat=3)
        } | {
            tuple(2 * c + o for c, o in zip(cube_b, off))
            for off in itertools.product((0, 1), repeat=3)
        }
        for ca, cb in self.all_pairs():
            merged = associate_cycles(
                config_cycle_at(ca, cube_a), config_cycle_at(cb, cube_b), 0
            )
            assert is_valid_cycle(merged, expected)

    def test_association_preserves_vertices_all_axes(self):
        for axis in range(3):
            cube_b = tuple(1 if a == axis else 0 for a in range(3))
            for ca, cb in self.all_pairs():
                merged = associate_cycles(
                    config_cycle_at(ca, (0, 0, 0)), config_cycle_at(cb, cube_b), axis
                )
                assert len(merged) == 16
                assert len(set(merged)) == 16

    def test_swapped_order_accepted(self):
        ca, cb = CUBE_CYCLE_CONFIGS[0], CUBE_CYCLE_CONFIGS[3]
        merged = associate_cycles(
            config_cycle_at(cb, (1, 0, 0)), config_cycle_at(ca, (0, 0, 0)), 0
        )
        assert len(merged) == 16

    def test_non_adjacent_rejected(self):
        ca = config_cycle_at(CUBE_CYCLE_CONFIGS[0], (0, 0, 0))
        cb = config_cycle_at(CUBE_CYCLE_CONFIGS[1], (2, 0, 0))
        with pytest.raises(CycleAssociationError):
            associate_cycles(ca, cb, 0)


class TestDdSfc3d:
    def test_2x2x2_eight_steps(self):
        curve = dd_sfc_3d(make_field((2, 2, 2), np.arange(8.0)))
        assert len(curve) == 8
        assert curve.is_cell_permutation()
        assert curve.steps_adjacent()

    def test_random_fields_and_seeds(self):
        rng = np.random.default_rng(2)
        for dims in [(4, 4, 4), (6, 4, 2)]:
            field = make_field(dims, rng.random(int(np.prod(dims))))
            for seed in range(3):
                curve = dd_sfc_3d(field, rng_seed=seed)
                assert curve.is_cell_permutation()
                assert curve.steps_adjacent()

    def test_8cubed_five_seeds(self):
        rng = np.random.default_rng(12)
        field = make_field((8, 8, 8), rng.random(512))
        for seed in range(5):
            curve = dd_sfc_3d(field, rng_seed=seed)
            assert curve.is_cell_permutation()
            assert curve.steps_adjacent()

    def test_seed_determinism(self):
        rng = np.random.default_rng(3)
        field = make_field((4, 4, 4), rng.random(64))
        a = dd_sfc_3d(field, alpha=0.1, rng_seed=9)
        b = dd_sfc_3d(field, alpha=0.1, rng_seed=9)
        assert a.coords() == b.coords()

    def test_seed_changes_curve(self):
        rng = np.random.default_rng(4)
        field = make_field((6, 6, 6), rng.random(216))
        a = dd_sfc_3d(field, rng_seed=0)
        b = dd_sfc_3d(field, rng_seed=1)
        assert a.coords() != b.coords()

    def test_alpha_one_data_independent(self):
        rng = np.random.default_rng(5)
        arr = rng.random(64)
        field = make_field((4, 4, 4), arr)
        shuffled = arr.copy()
        rng.shuffle(shuffled)
        assert (
            dd_sfc_3d(field, alpha=1.0, rng_seed=2).coords()
            == dd_sfc_3d(make_field((4, 4, 4), shuffled), alpha=1.0, rng_seed=2).coords()
        )

    def test_alpha_zero_block_independent(self):
        rng = np.random.default_rng(6)
        field = make_field((4, 4, 4), rng.random(64))
        a = dd_sfc_3d(field, alpha=0.0, block_size=(4, 4, 4), rng_seed=1)
        b = dd_sfc_3d(field, alpha=0.0, block_size=(2, 3, 1), rng_seed=1)
        assert a.coords() == b.coords()

    def test_odd_dims_rejected(self):
        with pytest.raises(ValueError, match="even dims"):
            dd_sfc_3d(make_field((3, 4, 4), np.zeros(48)))

    def test_2d_field_rejected(self):
        with pytest.raises(ValueError):
            dd_sfc_3d(make_field((4, 4), np.zeros(16)))
