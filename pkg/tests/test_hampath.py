import itertools

import numpy as np
import pytest

from spacefill.curve import Curve, Step
from spacefill.errors import NoHamiltonianPath
from spacefill.hampath import (
    HamPathProblem,
    exhaustive_min_hampath,
    parity_feasible,
    partitioned_hampath,
    path_cost,
)


def enumerate_min_cost(dims, values, v_s, exit_face):
    """Independent oracle: recursive enumeration of every Hamiltonian path."""
    ndim = len(dims)
    coords = (
        [(x, y) for y in range(dims[1]) for x in range(dims[0])]
        if ndim == 2
        else [
            (x, y, z)
            for z in range(dims[2])
            for y in range(dims[1])
            for x in range(dims[0])
        ]
    )
    index = {c: i for i, c in enumerate(coords)}
    vals = np.asarray(values, dtype=float).ravel()

    def neighbors(c):
        out = []
        for axis in range(ndim):
            for d in (-1, 1):
                q = list(c)
                q[axis] += d
                if 0 <= q[axis] < dims[axis]:
                    out.append(tuple(q))
        return out

    def on_face(c):
        if exit_face is None:
            return True
        axis, side = exit_face
        return c[axis] == (0 if side == 0 else dims[axis] - 1)

    n = len(coords)
    best = [None]

    def rec(path, used, cost):
        if len(path) == n:
            if on_face(path[-1]) and (best[0] is None or cost < best[0]):
                best[0] = cost
            return
        for w in neighbors(path[-1]):
            if w not in used:
                rec(
                    path + [w],
                    used | {w},
                    cost + abs(vals[index[w]] - vals[index[path[-1]]]),
                )

    rec([tuple(v_s)], {tuple(v_s)}, 0.0)
    return best[0]


class TestParityFeasible:
    def test_2x2_opposite_colors(self):
        p = HamPathProblem.create((2, 2), [0] * 4, (0, 0), (0, 1))
        assert parity_feasible(p, (1, 0)) is True

    def test_2x2_same_color(self):
        p = HamPathProblem.create((2, 2), [0] * 4, (0, 0), (0, 1))
        assert parity_feasible(p, (1, 1)) is False

    def test_3x3_corners_and_midpoints(self):
        p = HamPathProblem.create((3, 3), [0] * 9, (0, 0), (0, 1))
        assert parity_feasible(p, (2, 2)) is True
        assert parity_feasible(p, (2, 1)) is False

    def test_3x3_matches_enumeration(self):
        # corners admit a path, edge midpoints do not
        vals = np.zeros(9)
        assert enumerate_min_cost((3, 3), vals, (0, 0), None) is not None
        corner_to_corner = HamPathProblem.create((3, 3), vals, (0, 0), (0, 1))
        curve, _ = exhaustive_min_hampath(corner_to_corner)
        assert curve.steps[-1].coord in {(2, 0), (2, 2)}
        # no path from a corner can terminate at an edge midpoint
        def paths_ending_at(target):
            found = []

            def rec(path, used):
                if len(path) == 9:
                    if path[-1] == target:
                        found.append(path)
                    return
                x, y = path[-1]
                for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                    if 0 <= q[0] < 3 and 0 <= q[1] < 3 and q not in used:
                        rec(path + [q], used | {q})

            rec([(0, 0)], {(0, 0)})
            return found

        assert paths_ending_at((2, 1)) == []
        assert paths_ending_at((2, 2)) != []


class TestExhaustive:
    def test_2x2_uniform_reference_path(self):
        p = HamPathProblem.create((2, 2), [0, 0, 0, 0], (0, 0), (0, 1))
        curve, cost = exhaustive_min_hampath(p)
        assert cost == 0.0
        assert curve.coords() == [(0, 0), (0, 1), (1, 1), (1, 0)]

    def test_strip_unique_path(self):
        values = [3.0, 1.0, 4.0, 1.0, 5.0]
        p = HamPathProblem.create((5, 1), values, (0, 0), (0, 1))
        curve, cost = exhaustive_min_hampath(p)
        assert curve.coords() == [(i, 0) for i in range(5)]
        assert cost == pytest.approx(sum(abs(a - b) for a, b in zip(values, values[1:])))

    def test_matches_enumeration_3x3(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            vals = rng.random(9)
            p = HamPathProblem.create((3, 3), vals, (0, 0), (0, 1))
            _, cost = exhaustive_min_hampath(p)
            assert cost == pytest.approx(enumerate_min_cost((3, 3), vals, (0, 0), (0, 1)))

    def test_nonexistence_raises(self):
        # 2x2 exiting via the face whose only parity-feasible vertex is unreachable
        p = HamPathProblem.create((3, 3), np.zeros(9), (1, 0), (0, 1))
        # (1,0) is a minority-color vertex in an odd box: no Hamiltonian path at all
        with pytest.raises(NoHamiltonianPath):
            exhaustive_min_hampath(p)

    def test_over_limit_rejected(self):
        p = HamPathProblem.create((8, 5), np.zeros(40), (0, 0), (0, 1))
        with pytest.raises(ValueError, match="direct-solve limit"):
            exhaustive_min_hampath(p)

    def test_pruning_never_hurts(self):
        rng = np.random.default_rng(1)
        for dims in [(3, 3), (4, 3), (2, 2, 2)]:
            n = int(np.prod(dims))
            for _ in range(5):
                vals = rng.random(n)
                p = HamPathProblem.create(dims, vals, (0,) * len(dims), (0, 1))
                with_pruning = exhaustive_min_hampath(p)
                without = exhaustive_min_hampath(p, cost_pruning=False)
                assert with_pruning[1] == pytest.approx(without[1])
                assert with_pruning[0].coords() == without[0].coords()

    def test_stats_out(self):
        p = HamPathProblem.create((3, 3), np.arange(9.0), (0, 0), (0, 1))
        stats = {}
        exhaustive_min_hampath(p, stats_out=stats)
        assert stats["nodes_expanded"] > 0

    def test_single_vertex(self):
        p = HamPathProblem.create((1, 1), [5.0], (0, 0), None)
        curve, cost = exhaustive_min_hampath(p)
        assert curve.coords() == [(0, 0)]
        assert cost == 0.0


class TestPartitioned:
    def test_direct_and_partitioned_agree_at_limit(self):
        rng = np.random.default_rng(2)
        vals = rng.random(32)
        p = HamPathProblem.create((8, 4), vals, (0, 0), (0, 1))
        direct, _ = exhaustive_min_hampath(p)
        forced, _ = partitioned_hampath(p, direct_limit=16)
        for curve in (direct, forced):
            assert curve.is_cell_permutation()
            assert curve.steps_adjacent()
            assert curve.steps[0].coord == (0, 0)
            assert curve.steps[-1].coord[0] == 7

    def test_16x4_uniform_cost_zero(self):
        p = HamPathProblem.create((16, 4), np.zeros(64), (0, 0), (0, 1))
        curve, cost = partitioned_hampath(p)
        assert curve.is_cell_permutation()
        assert curve.steps_adjacent()
        assert cost == 0.0

    def test_4x4x4_exit_top(self):
        rng = np.random.default_rng(3)
        p = HamPathProblem.create((4, 4, 4), rng.random(64), (0, 0, 0), (2, 1))
        curve, _ = partitioned_hampath(p, direct_limit=16)
        assert curve.is_cell_permutation()
        assert curve.steps_adjacent()
        assert curve.steps[-1].coord[2] == 3

    def test_endpoint_contract(self):
        rng = np.random.default_rng(4)
        for dims, face in [((6, 5), (0, 1)), ((4, 9), (1, 0)), ((12, 4), (1, 1))]:
            vals = rng.random(int(np.prod(dims)))
            p = HamPathProblem.create(dims, vals, (0, 0), face)
            curve, _ = partitioned_hampath(p, direct_limit=16)
            assert curve.steps[0].coord == (0, 0)
            axis, side = face
            expected = 0 if side == 0 else dims[axis] - 1
            assert curve.steps[-1].coord[axis] == expected
            assert curve.is_cell_permutation()
            assert curve.steps_adjacent()


class TestPathCost:
    def test_single_step_zero(self):
        c = Curve([Step((0, 0))], dims=(1, 1))
        assert path_cost(c, [7.0]) == 0.0

    def test_arithmetic(self):
        c = Curve([Step((0, 0)), Step((1, 0)), Step((2, 0))], dims=(3, 1))
        assert path_cost(c, [0.0, 1.0, 3.0]) == pytest.approx(3.0)

    def test_reverse_invariant(self):
        rng = np.random.default_rng(5)
        vals = rng.random(6)
        fwd = Curve([Step((i, 0)) for i in range(6)], dims=(6, 1))
        rev = Curve([Step((i, 0)) for i in reversed(range(6))], dims=(6, 1))
        assert path_cost(fwd, vals) == pytest.approx(path_cost(rev, vals))

    def test_empty_curve_rejected(self):
        with pytest.raises(ValueError):
            path_cost(Curve([], dims=(1, 1)), [1.0])
