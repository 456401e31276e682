import csv
import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from triqmc.cli import main, parse_n_list
from triqmc.discrepancy import parallelogram_discrepancy
from triqmc.geometry import SampleSet, reference_triangle
from triqmc.io import points_to_csv, read_points_csv
from triqmc.lattice import LatticeConfig, kronecker_lattice
from triqmc.vdc import vdc_sequence

from .conftest import GOLDEN


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def run_proc(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "triqmc", *argv], capture_output=True, text=True, env=env)


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array([[float(v) if v not in ("true", "false") else float(v == "true") for v in r] for r in rows[1:]])


def assert_matches_golden(text, name):
    head, got = table(text)
    ghead, want = table((GOLDEN / name).read_text())
    assert head == ghead
    assert got.shape == want.shape
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-15)


class TestGenerate:
    def test_vdc_golden(self, capsys):
        code, out = run(["generate", "--gen", "vdc", "--triangle", "equilateral", "--n", "64"], capsys)
        assert code == 0
        assert len(out.splitlines()) == 65
        assert_matches_golden(out, "vdc_equilateral_64.csv")

    def test_vdc_matches_library(self, capsys):
        _, out = run(["generate", "--n", "64"], capsys)
        _, pts = table(out)
        assert np.array_equal(pts, vdc_sequence(reference_triangle("equilateral_unit_area"), 64).points)

    def test_lattice_golden(self, capsys):
        code, out = run(["generate", "--gen", "lattice", "--n", "64", "--angle-tan", "1,1,2,1"], capsys)
        assert code == 0
        assert_matches_golden(out, "lattice_64.csv")

    def test_custom_triangle(self, capsys):
        _, out = run(["generate", "--triangle", "0,0,2,0,0,2", "--n", "1"], capsys)
        assert out.splitlines()[1] == "0.66666666666666663,0.66666666666666663"

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "p.csv"
        code, out = run(["generate", "--n", "8", "--out", str(path)], capsys)
        assert code == 0 and out == ""
        assert path.read_text().startswith("x,y\n")

    def test_byte_identical(self):
        argv = ("generate", "--gen", "vdc-scrambled", "--n", "100", "--seed", "3")
        a, b = run_proc(*argv), run_proc(*argv)
        assert a.returncode == 0
        assert a.stdout == b.stdout


class TestDiscrepancy:
    def test_vdc16(self, capsys):
        code, out = run(["discrepancy", "--gen", "vdc", "--n", "16"], capsys)
        assert code == 0
        rep = json.loads(out)
        assert rep["value"] == pytest.approx(23 / 144, abs=1e-12)
        assert rep["family"] == "parallelogram"

    def test_lattice_sweep_golden(self, capsys):
        code, out = run(["discrepancy", "--gen", "lattice", "--n-list", "16..2048"], capsys)
        assert code == 0
        assert_matches_golden(out, "lattice_sweep.csv")

    def test_grid_mode(self, capsys):
        _, out = run(["discrepancy", "--n", "16", "--grid", "256"], capsys)
        rep = json.loads(out)
        assert rep["approximate"] is True
        assert rep["value"] <= 23 / 144 + 1e-12

    def test_points_file_round_trip(self, tmp_path, capsys):
        path = tmp_path / "pts.csv"
        pts = [(0.1, 0.2), (0.5, 0.3), (0.05, 0.9)]
        path.write_text(points_to_csv(pts))
        _, out = run(["discrepancy", "--points", str(path), "--triangle", "right"], capsys)
        expected = parallelogram_discrepancy(SampleSet(reference_triangle("right_unit"), pts)).value
        assert json.loads(out)["value"] == expected

    def test_generate_then_evaluate_bitwise(self, tmp_path, capsys):
        path = tmp_path / "lat.csv"
        run(["generate", "--gen", "lattice", "--n", "200", "--triangle", "right", "--out", str(path)], capsys)
        back = read_points_csv(path)
        mem = kronecker_lattice(LatticeConfig(200)).points
        assert np.array_equal(back, mem)
        _, out = run(["discrepancy", "--points", str(path), "--triangle", "right"], capsys)
        assert json.loads(out)["value"] == parallelogram_discrepancy(SampleSet(reference_triangle("right_unit"), mem)).value

    def test_anchored_box(self, tmp_path, capsys):
        path = tmp_path / "pc.csv"
        path.write_text(points_to_csv([(0.0, 0.0)]))
        _, out = run(["discrepancy", "--points", str(path), "--triangle", "pc", "--family", "anchored_box"], capsys)
        rep = json.loads(out)
        assert rep["family"] == "anchored_box" and rep["value"] == pytest.approx(1.0)

    def test_json_list(self, capsys):
        _, out = run(["discrepancy", "--n", "1,4", "--format", "json"], capsys)
        reps = json.loads(out)
        assert [r["N"] for r in reps] == [1, 4]
        assert reps[0]["value"] == pytest.approx(7 / 9)

    def test_threads_env(self):
        env = {**os.environ, "TRIQMC_THREADS": "4"}
        a = run_proc("discrepancy", "--gen", "lattice", "--n-list", "16..256", env=env)
        b = run_proc("discrepancy", "--gen", "lattice", "--n-list", "16..256")
        assert a.returncode == 0
        assert a.stdout == b.stdout


class TestConverge:
    def test_cos2pi_golden(self, capsys):
        argv = ["converge", "--gen", "vdc-scrambled", "--f", "cos2pi", "--n", "16,64,256,1024,4096", "--R", "50", "--seed", "7"]
        code, out = run(argv, capsys)
        assert code == 0
        assert len(out.splitlines()) == 6
        assert_matches_golden(out, "converge_cos2pi.csv")

    def test_halfplane_lattice_golden(self, capsys):
        code, out = run(["converge", "--gen", "lattice", "--f", "halfplane", "--n", "64,256,1024"], capsys)
        assert code == 0
        assert_matches_golden(out, "converge_halfplane_lattice.csv")
        _, rows = table(out)
        assert np.all(np.diff(rows[:, 2]) < 0)

    def test_integrate_const(self, capsys):
        _, out = run(["integrate", "--gen", "vdc", "--f", "const1", "--n", "100"], capsys)
        _, rows = table(out)
        assert rows[0, 1] == reference_triangle("equilateral_unit_area").area

    def test_json(self, capsys):
        _, out = run(["integrate", "--f", "const1", "--n", "10", "--format", "json"], capsys)
        assert json.loads(out)[0]["N"] == 10


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["generate", "--n", "0"],
            ["generate", "--n", "abc"],
            ["generate", "--n", "4", "--triangle", "1,2,3"],
            ["generate", "--gen", "lattice", "--n", "16", "--angle-rad", "0.7"],
            ["generate", "--gen", "lattice", "--n", "16", "--angle-tan", "1,1,4,1"],
            ["generate", "--gen", "vdc-scrambled", "--n", "16"],
            ["integrate", "--f", "nope", "--n", "16"],
            ["discrepancy"],
            ["discrepancy", "--n", "4", "--grid", "1"],
            ["frobnicate"],
        ],
    )
    def test_usage(self, argv):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2

    def test_unknown_integrand_lists_names(self):
        res = run_proc("integrate", "--f", "nope", "--n", "16")
        assert res.returncode == 2
        assert "cos2pi" in res.stderr

    def test_missing_file(self, tmp_path):
        assert main(["discrepancy", "--points", str(tmp_path / "none.csv")]) == 3

    def test_points_outside(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n5,5\n")
        assert main(["discrepancy", "--points", str(path), "--triangle", "right"]) == 3

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n0.1,0.1\n")
        assert main(["discrepancy", "--points", str(path), "--triangle", "right"]) == 3

    def test_degenerate_triangle(self):
        assert main(["generate", "--triangle", "0,0,1,1,2,2", "--n", "4"]) == 3

    def test_bad_threads(self):
        res = run_proc("discrepancy", "--n", "1,4", env={**os.environ, "TRIQMC_THREADS": "zero"})
        assert res.returncode == 2

    def test_unsafe_angle_allowed(self, capsys):
        code, out = run(["generate", "--gen", "lattice", "--n", "16", "--angle-rad", "0.7853981633974483", "--unsafe-angle"], capsys)
        assert code == 0 and len(out.splitlines()) > 1


@pytest.mark.parametrize("spec,expected", [("64", [64]), ("16,64", [16, 64]), ("16..128", [16, 32, 64, 128])])
def test_parse_n_list(spec, expected):
    assert parse_n_list(spec) == expected
