"""Command line interface: subcommands, artifacts, exit codes, determinism."""

import json
import re
import subprocess
import sys

import numpy as np
import pytest

import svem.analysis as analysis
from svem import SingularSystem, cli, read_off

ERROR_LINE = re.compile(r"^error: [A-Za-z]+: .+$")


def run_cli(argv, capsys):
    """Invoke the CLI in process, normalizing argparse's SystemExit."""
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def assert_single_error_line(err, name):
    lines = err.strip().splitlines()
    assert len(lines) == 1
    assert ERROR_LINE.match(lines[0])
    assert lines[0].startswith(f"error: {name}: ")


@pytest.fixture(scope="module")
def cylinder_files(tmp_path_factory):
    """OFF files for the two half-cylinder grids and their pasted union."""
    root = tmp_path_factory.mktemp("cyl")
    paths = {
        "a": str(root / "a.off"),
        "b": str(root / "b.off"),
        "merged": str(root / "merged.off"),
    }
    assert cli.main(["mesh", "cylinder", "--half", "1", "--n", "2", "--out", paths["a"]]) == 0
    assert cli.main(["mesh", "cylinder", "--half", "2", "--n", "2", "--out", paths["b"]]) == 0
    assert cli.main(["paste", paths["a"], paths["b"], "--out", paths["merged"]]) == 0
    return paths


@pytest.fixture(scope="module")
def sphere_file(tmp_path_factory):
    path = str(tmp_path_factory.mktemp("sph") / "sphere2.off")
    assert cli.main(["mesh", "sphere", "--level", "2", "--out", path]) == 0
    return path


class TestMeshCommand:
    def test_sphere_level0_payload(self, capsys, tmp_path):
        out_path = tmp_path / "ico.off"
        code, out, err = run_cli(
            ["mesh", "sphere", "--level", "0", "--out", str(out_path)], capsys
        )
        assert code == 0
        assert err == ""
        payload = json.loads(out)
        assert payload["n_vertices"] == 12
        assert payload["n_faces"] == 20
        assert payload["counts_by_size"] == {"3": 20}
        assert set(payload["regularity"]) >= {"h", "gamma1", "gamma2"}
        mesh = read_off(str(out_path))
        assert mesh.n_vertices == 12

    def test_cylinder_half2_n1(self, capsys):
        code, out, _ = run_cli(["mesh", "cylinder", "--half", "2", "--n", "1"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["n_vertices"] == 6
        assert payload["n_faces"] == 2

    def test_negative_level_exits_2(self, capsys):
        code, _, err = run_cli(["mesh", "sphere", "--level", "-1"], capsys)
        assert code == 2
        assert_single_error_line(err, "InvalidParameter")

    def test_missing_required_flag_exits_2(self, capsys):
        code, _, err = run_cli(["mesh", "sphere"], capsys)
        assert code == 2
        assert_single_error_line(err, "InvalidParameter")


class TestPasteCommand:
    def test_half_cylinders_report_pentagons(self, capsys, cylinder_files):
        code, out, _ = run_cli(
            ["paste", cylinder_files["a"], cylinder_files["b"]], capsys
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["counts_by_size"] == {"4": 36, "5": 4}
        assert payload["diagnostics"] == []

    def test_disjoint_meshes_exit_1(self, capsys, tmp_path):
        from svem import SurfaceMesh, write_off

        a = tmp_path / "a.off"
        b = tmp_path / "b.off"
        assert cli.main(["mesh", "cylinder", "--half", "2", "--n", "1", "--out", str(a)]) == 0
        capsys.readouterr()
        far = read_off(str(a))
        write_off(SurfaceMesh(far.vertices + np.array([50.0, 0.0, 0.0]), far.faces), str(b))
        code, _, err = run_cli(["paste", str(a), str(b)], capsys)
        assert code == 1
        assert_single_error_line(err, "SeamMismatch")


class TestSolveCommand:
    def test_sphere_payload_and_artifacts(self, capsys, tmp_path, sphere_file):
        vtk = tmp_path / "run.vtk"
        csv = tmp_path / "run.csv"
        dump = tmp_path / "mats"
        code, out, err = run_cli(
            [
                "solve",
                "--mesh", sphere_file,
                "--problem", "sphere-xy",
                "--vtk", str(vtk),
                "--csv", str(csv),
                "--dump-matrices", str(dump),
            ],
            capsys,
        )
        assert code == 0
        assert err == ""
        payload = json.loads(out)
        assert payload["problem"] == "sphere-xy"
        assert payload["n_dofs"] == 162
        assert payload["discrete_mean"] <= 1e-10
        assert payload["residual"] <= 1e-8
        assert 0 < payload["err_h1"]
        assert 0 < payload["err_l2"] < payload["err_h1"]
        assert payload["geometric_probe"] > 0

        lines = vtk.read_text().splitlines()
        assert lines[0] == "# vtk DataFile Version 3.0"
        assert lines[2] == "ASCII"
        assert lines[3] == "DATASET POLYDATA"
        assert lines[4].startswith("POINTS 162 double")
        body = "\n".join(lines)
        for name in ("u_h", "u_exact", "error"):
            assert f"SCALARS {name} double 1" in body

        csv_lines = csv.read_text().splitlines()
        assert csv_lines[0] == "level,h,n_dofs,err_l2,err_linf,err_h1,eoc_l2,eoc_linf,eoc_h1"
        assert csv_lines[1].endswith(",,,")  # single row: EOC cells empty
        for fname in ("A.mtx", "M.mtx", "b.txt", "xi.txt"):
            assert (dump / fname).is_file()
        assert (dump / "A.mtx").read_text().startswith("%%MatrixMarket")

    def test_cylinder_boundary_is_exact(self, capsys, cylinder_files):
        code, out, _ = run_cli(
            ["solve", "--mesh", cylinder_files["merged"], "--problem", "cylinder-exp"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["boundary_deviation"] == 0.0
        assert "discrete_mean" not in payload

    def test_problem_mesh_mismatch_exits_1(self, capsys, sphere_file):
        code, _, err = run_cli(
            ["solve", "--mesh", sphere_file, "--problem", "cylinder-exp"], capsys
        )
        assert code == 1
        assert_single_error_line(err, "ConstraintMismatch")

    def test_plot_writes_png(self, capsys, tmp_path, cylinder_files):
        png = tmp_path / "u.png"
        code, _, _ = run_cli(
            [
                "solve",
                "--mesh", cylinder_files["merged"],
                "--problem", "cylinder-exp",
                "--plot", str(png),
            ],
            capsys,
        )
        assert code == 0
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_threads_env_and_flag(self, capsys, monkeypatch, cylinder_files):
        base = ["solve", "--mesh", cylinder_files["merged"], "--problem", "cylinder-exp"]
        monkeypatch.setenv("SVEM_THREADS", "4")
        code, out_env, _ = run_cli(base, capsys)
        assert code == 0

        monkeypatch.setenv("SVEM_THREADS", "not-a-number")
        code, _, err = run_cli(base, capsys)
        assert code == 2
        assert_single_error_line(err, "InvalidParameter")

        code, out_flag, _ = run_cli(base + ["--threads", "2"], capsys)
        assert code == 0  # explicit flag wins over the broken env var
        assert out_flag == out_env


class TestConvergenceCommand:
    def test_sphere_csv_and_slopes(self, capsys, tmp_path):
        csv = tmp_path / "sphere.csv"
        code, out, _ = run_cli(
            [
                "convergence",
                "--problem", "sphere-xy",
                "--levels", "1..2",
                "--csv", str(csv),
            ],
            capsys,
        )
        assert code == 0
        slopes = json.loads(out)
        assert set(slopes) == {"slope_l2", "slope_linf", "slope_h1"}
        lines = csv.read_text().splitlines()
        assert lines[0] == "level,h,n_dofs,err_l2,err_linf,err_h1,eoc_l2,eoc_linf,eoc_h1"
        assert lines[1].startswith("1,") and lines[1].endswith(",,,")
        assert lines[2].startswith("2,") and not lines[2].endswith(",,,")
        assert any(line.startswith("# slope_l2=") for line in lines)

    def test_stdout_table_without_csv_flag(self, capsys):
        code, out, _ = run_cli(
            ["convergence", "--problem", "sphere-xy", "--levels", "0..1"], capsys
        )
        assert code == 0
        assert out.startswith("level,h,n_dofs,")
        assert "# slope_l2=" in out

    def test_cylinder_h_column_is_nominal(self, capsys, tmp_path):
        csv = tmp_path / "cyl.csv"
        code, _, _ = run_cli(
            [
                "convergence",
                "--problem", "cylinder-exp",
                "--n-list", "2,4",
                "--csv", str(csv),
            ],
            capsys,
        )
        assert code == 0
        rows = [l for l in csv.read_text().splitlines() if l and not l.startswith(("#", "level"))]
        for row, n in zip(rows, (2, 4)):
            h = float(row.split(",")[1])
            assert h == 2.0 * np.sin(np.pi / (8 * n))

    def test_repeat_runs_are_byte_identical(self, capsys, tmp_path):
        args = ["convergence", "--problem", "cylinder-exp", "--n-list", "2,4"]
        first = tmp_path / "one.csv"
        second = tmp_path / "two.csv"
        assert run_cli(args + ["--csv", str(first)], capsys)[0] == 0
        assert run_cli(args + ["--csv", str(second)], capsys)[0] == 0
        assert first.read_bytes() == second.read_bytes()

    def test_plot_writes_png(self, capsys, tmp_path):
        png = tmp_path / "conv.png"
        code, _, _ = run_cli(
            [
                "convergence",
                "--problem", "cylinder-exp",
                "--n-list", "2,4",
                "--plot", str(png),
            ],
            capsys,
        )
        assert code == 0
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_n_list_rejected_for_sphere(self, capsys):
        code, _, err = run_cli(
            ["convergence", "--problem", "sphere-xy", "--n-list", "5,10"], capsys
        )
        assert code == 2
        assert_single_error_line(err, "InvalidParameter")

    def test_levels_rejected_for_cylinder(self, capsys):
        code, _, err = run_cli(
            ["convergence", "--problem", "cylinder-exp", "--levels", "2..3"], capsys
        )
        assert code == 2
        assert_single_error_line(err, "InvalidParameter")

    def test_unparseable_levels_exit_2(self, capsys):
        code, _, err = run_cli(
            ["convergence", "--problem", "sphere-xy", "--levels", "a..b"], capsys
        )
        assert code == 2
        assert_single_error_line(err, "InvalidParameter")

    def test_partial_csv_survives_failing_level(self, capsys, tmp_path, monkeypatch):
        real = analysis.generators.sphere_hybrid

        def boom(level):
            if level == 2:
                raise SingularSystem("synthetic failure")
            return real(level)

        monkeypatch.setattr(analysis.generators, "sphere_hybrid", boom)
        csv = tmp_path / "partial.csv"
        code, _, err = run_cli(
            [
                "convergence",
                "--problem", "sphere-xy",
                "--levels", "1..3",
                "--csv", str(csv),
            ],
            capsys,
        )
        assert code == 1
        assert_single_error_line(err, "SingularSystem")
        assert "level 2:" in err
        rows = [l for l in csv.read_text().splitlines() if l and not l.startswith(("#", "level"))]
        assert len(rows) == 1
        assert rows[0].startswith("1,")


def test_module_entry_point_runs_in_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "svem.cli", "mesh", "sphere", "--level", "0"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n_vertices"] == 12
