import json
import threading
import urllib.error
import urllib.request

import numpy as np
import pytest

from spacefill.cli import main
from spacefill.curve import read_curve
from spacefill.server import make_server

from conftest import write_descriptor


def run_cli(*args):
    return main(list(args))


class TestGen:
    def test_scanline_2x2(self, tmp_path):
        desc = write_descriptor(tmp_path, (2, 2), [0, 1, 2, 3])
        out = tmp_path / "out"
        assert run_cli("gen", "--input", str(desc), "--method", "scanline", "--output", str(out)) == 0
        lines = (out / "curve.txt").read_text().splitlines()
        assert len(lines) == 5  # header + 4 steps
        assert (out / "values.csv").is_file()
        assert (out / "manifest.json").is_file()

    def test_alpha_out_of_range_is_usage_error(self, tmp_path, capsys):
        desc = write_descriptor(tmp_path, (2, 2), [0, 1, 2, 3])
        code = run_cli(
            "gen", "--input", str(desc), "--method", "ours2d",
            "--alpha", "1.5", "--output", str(tmp_path / "o"),
        )
        assert code == 1

    def test_unknown_method_is_usage_error(self, tmp_path):
        desc = write_descriptor(tmp_path, (2, 2), [0, 1, 2, 3])
        code = run_cli(
            "gen", "--input", str(desc), "--method", "zigzag", "--output", str(tmp_path / "o")
        )
        assert code == 1

    def test_method_dims_incompatibility_is_data_error(self, tmp_path):
        desc = write_descriptor(tmp_path, (2, 2, 2), list(range(8)))
        code = run_cli(
            "gen", "--input", str(desc), "--method", "ours2d", "--output", str(tmp_path / "o")
        )
        assert code == 2

    def test_missing_input_is_data_error(self, tmp_path):
        code = run_cli(
            "gen", "--input", str(tmp_path / "absent.json"), "--method", "scanline",
            "--output", str(tmp_path / "o"),
        )
        assert code == 2

    def test_oursms_auto_tree_noted_in_manifest(self, tmp_path):
        rng = np.random.default_rng(0)
        desc = write_descriptor(tmp_path, (8, 8), rng.random(64))
        out = tmp_path / "out"
        assert run_cli("gen", "--input", str(desc), "--method", "oursms", "--output", str(out)) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert "auto-built" in manifest["tree"]
        assert (out / "tree.txt").is_file()
        assert (out / "reconstruction.json").is_file()

    def test_manifest_round_trip_reproduces_bytes(self, tmp_path):
        rng = np.random.default_rng(1)
        desc = write_descriptor(tmp_path, (8, 8), rng.random(64))
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        assert run_cli("gen", "--input", str(desc), "--method", "ours2d", "--output", str(out1)) == 0
        manifest = json.loads((out1 / "manifest.json").read_text())
        args = [
            "gen", "--method", manifest["method"],
            "--alpha", str(manifest["alpha"]), "--seed", str(manifest["seed"]),
            "--threshold", str(manifest["threshold"]), "--output", str(out2),
        ]
        for spec in manifest["input"]:
            args += ["--input", spec]
        assert run_cli(*args) == 0
        assert (out1 / "curve.txt").read_bytes() == (out2 / "curve.txt").read_bytes()
        assert (out1 / "values.csv").read_bytes() == (out2 / "values.csv").read_bytes()

    def test_builtin_dataset_input(self, tmp_path):
        out = tmp_path / "out"
        assert run_cli("gen", "--input", "twoblob8", "--method", "hilbert", "--output", str(out)) == 0
        curve = read_curve(out / "curve.txt")
        assert len(curve) == 64

    def test_ensemble_writes_bands(self, tmp_path):
        rng = np.random.default_rng(2)
        descs = []
        for i in range(3):
            sub = tmp_path / f"m{i}"
            sub.mkdir()
            descs.append(write_descriptor(sub, (4, 4), rng.random(16) + i * 0.1))
        out = tmp_path / "out"
        args = ["gen", "--method", "scanline", "--output", str(out)]
        for d in descs:
            args += ["--input", str(d)]
        assert run_cli(*args) == 0
        bands = json.loads((out / "bands.json").read_text())
        assert set(bands) == {"min", "q25", "median", "q75", "max"}
        assert len(bands["median"]) == 16
        assert all(
            lo <= hi for lo, hi in zip(bands["min"], bands["max"])
        )


class TestEval:
    def test_single_dataset_report(self, tmp_path):
        out = tmp_path / "report"
        code = run_cli(
            "eval", "--datasets", "twoblob8", "--methods", "scanline,hilbert",
            "--max-lag", "8", "--output", str(out),
        )
        assert code == 0
        lines = (out / "report.csv").read_text().splitlines()
        assert lines[0] == "method,dataset,metric,lag,r"
        assert (out / "autocorrelation_value.svg").is_file()

    def test_unknown_method_lists_valid(self, tmp_path, capsys):
        code = run_cli(
            "eval", "--datasets", "twoblob8", "--methods", "bogus",
            "--output", str(tmp_path / "r"),
        )
        assert code == 1
        assert "valid methods" in capsys.readouterr().err

    def test_missing_datasets_flag_is_usage(self, tmp_path):
        assert run_cli("eval", "--methods", "scanline", "--output", str(tmp_path / "r")) == 1


@pytest.fixture
def served_2d(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("serve2d")
    desc = write_descriptor(tmp, (4, 4), list(range(16)))
    out = tmp / "out"
    assert run_cli("gen", "--input", str(desc), "--method", "scanline", "--output", str(out)) == 0
    server = make_server(out, host="127.0.0.1", port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()


def get_json(url):
    with urllib.request.urlopen(url) as resp:
        return json.loads(resp.read())


class TestServe:
    def test_meta(self, served_2d):
        meta = get_json(served_2d + "/api/meta")
        assert meta["dims"] == [4, 4]
        assert meta["method"] == "scanline"
        assert meta["count"] == 16

    def test_curve_length(self, served_2d):
        payload = get_json(served_2d + "/api/curve")
        assert len(payload["x"]) == 16
        assert payload["level"] == [1] * 16

    def test_values(self, served_2d):
        payload = get_json(served_2d + "/api/values")
        assert payload["u"] == [float(i) for i in range(16)]
        assert payload["bands"] is None

    def test_slice_2d(self, served_2d):
        payload = get_json(served_2d + "/api/slice")
        assert payload["dims"] == [4, 4]
        assert payload["values"] == [float(i) for i in range(16)]

    def test_slice_z_on_2d_rejected(self, served_2d):
        with pytest.raises(urllib.error.HTTPError) as err:
            get_json(served_2d + "/api/slice?z=5")
        assert err.value.code == 400
        assert "one slice" in json.loads(err.value.read())["error"]

    def test_unknown_endpoint_404(self, served_2d):
        with pytest.raises(urllib.error.HTTPError) as err:
            get_json(served_2d + "/api/nope")
        assert err.value.code == 404

    def test_repeated_gets_identical(self, served_2d):
        a = get_json(served_2d + "/api/curve")
        b = get_json(served_2d + "/api/curve")
        assert a == b

    def test_3d_slices(self, tmp_path):
        desc = write_descriptor(tmp_path, (2, 2, 2), list(range(8)))
        out = tmp_path / "out"
        assert run_cli("gen", "--input", str(desc), "--method", "scanline", "--output", str(out)) == 0
        server = make_server(out, host="127.0.0.1", port=0)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        base = f"http://127.0.0.1:{server.server_address[1]}"
        try:
            s0 = get_json(base + "/api/slice?z=0")
            s1 = get_json(base + "/api/slice?z=1")
            assert s0["values"] == [0.0, 1.0, 2.0, 3.0]
            assert s1["values"] == [4.0, 5.0, 6.0, 7.0]
        finally:
            server.shutdown()
            server.server_close()


class TestEnsembleServe:
    def test_values_endpoint_carries_bands(self, tmp_path):
        rng = np.random.default_rng(3)
        descs = []
        for i in range(3):
            sub = tmp_path / f"m{i}"
            sub.mkdir()
            descs.append(write_descriptor(sub, (4, 4), rng.random(16) + 0.2 * i))
        out = tmp_path / "out"
        args = ["gen", "--method", "scanline", "--output", str(out)]
        for d in descs:
            args += ["--input", str(d)]
        assert run_cli(*args) == 0
        server = make_server(out, host="127.0.0.1", port=0)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        base = f"http://127.0.0.1:{server.server_address[1]}"
        try:
            meta = get_json(base + "/api/meta")
            assert meta["ensemble"] is True
            values = get_json(base + "/api/values")
            assert set(values["bands"]) == {"min", "q25", "median", "q75", "max"}
            assert len(values["bands"]["median"]) == 16
        finally:
            server.shutdown()
            server.server_close()


class TestExitCodes:
    def test_no_command_is_usage(self):
        assert main([]) == 1

    def test_help_exits_zero(self):
        assert main(["--help"]) == 0

    def test_console_script_installed(self):
        import subprocess

        proc = subprocess.run(
            ["spacefill", "--version"], capture_output=True, text=True
        )
        assert proc.returncode == 0
        assert "spacefill" in proc.stdout
