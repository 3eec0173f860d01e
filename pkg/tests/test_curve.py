import pytest

from spacefill.curve import Curve, Step, read_curve, write_curve


def square_curve():
    steps = [Step((0, 0)), Step((0, 1)), Step((1, 1)), Step((1, 0))]
    return Curve(steps, dims=(2, 2), method="test", alpha=0.25)


class TestCurve:
    def test_rank_of(self):
        c = square_curve()
        assert c.rank_of((0, 0)) == 0
        assert c.rank_of((1, 0)) == 3

    def test_permutation_check(self):
        assert square_curve().is_cell_permutation()
        missing = Curve([Step((0, 0))], dims=(2, 2))
        assert not missing.is_cell_permutation()
        repeated = Curve([Step((0, 0))] * 4, dims=(2, 2))
        assert not repeated.is_cell_permutation()

    def test_adjacency_check(self):
        assert square_curve().steps_adjacent()
        jump = Curve([Step((0, 0)), Step((1, 1))], dims=(2, 2))
        assert not jump.steps_adjacent()

    def test_max_level(self):
        c = Curve([Step((0, 0), level=2), Step((2, 0), level=1)], dims=(4, 4))
        assert c.max_level == 2


class TestCurveFile:
    def test_write_format(self, tmp_path):
        path = write_curve(square_curve(), tmp_path / "curve.txt")
        lines = path.read_text().splitlines()
        assert lines[0] == "# dims=2x2 method=test alpha=0.25"
        assert lines[1] == "0 0 0 0 1"
        assert lines[4] == "3 1 0 0 1"

    def test_round_trip_2d(self, tmp_path):
        c = square_curve()
        again = read_curve(write_curve(c, tmp_path / "curve.txt"))
        assert again.coords() == c.coords()
        assert again.dims == c.dims
        assert again.method == "test"
        assert again.alpha == 0.25

    def test_round_trip_3d_levels(self, tmp_path):
        steps = [Step((0, 0, 0), level=2), Step((0, 0, 2), level=1)]
        c = Curve(steps, dims=(4, 4, 4), method="m")
        again = read_curve(write_curve(c, tmp_path / "c.txt"))
        assert again.steps[0].coord == (0, 0, 0)
        assert again.steps[0].level == 2
        assert again.steps[1].coord == (0, 0, 2)
        assert again.alpha is None

    def test_missing_header(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("0 0 0 0 1\n")
        with pytest.raises(ValueError, match="header"):
            read_curve(path)
