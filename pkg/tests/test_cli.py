import json

import numpy as np
import pytest
from typer.testing import CliRunner

from obstacle_mvs.errors import SolverStagnationError
from obstacle_mvs.main import EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_NONCONVERGENCE, EXIT_SUITE_FAILURE, app
from obstacle_mvs.runner import RunOutcome, SuiteResult

runner = CliRunner()

SMALL = {"name": "small", "grid": {"dim": 2, "M": 1.0, "h": 1 / 16}, "problem": {"radii": [0.25]}}


@pytest.fixture
def config_file(tmp_path):
    def write(data=None):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(SMALL if data is None else data), encoding="utf-8")
        return str(path)
    return write


def invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


class TestSolve:
    def test_solve_writes_artifacts(self, config_file, tmp_path):
        out = tmp_path / "out"
        result = invoke("solve", "--config", config_file(), "--out", out)
        assert result.exit_code == 0, result.output
        assert (out / "manifest.json").exists()
        assert (out / "solutions" / "solution_R0.25.csv").exists()
        assert (out / "sets" / "set_R0.25.csv").exists()
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["converged"] is True
        assert manifest["config"]["name"] == "small"
        assert "0.25" in manifest["sets"]

    def test_rerun_is_byte_identical(self, config_file, tmp_path):
        path = config_file()
        for name in ("a", "b"):
            assert invoke("solve", "--config", path, "--out", tmp_path / name).exit_code == 0
        for rel in ("manifest.json", "sets/set_R0.25.csv", "solutions/solution_R0.25.csv"):
            assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()

    def test_parallel_matches_serial(self, config_file, tmp_path):
        path = config_file({**SMALL, "problem": {"radii": [0.125, 0.25]}})
        assert invoke("solve", "--config", path, "--out", tmp_path / "serial").exit_code == 0
        assert invoke("solve", "--config", path, "--out", tmp_path / "parallel", "--jobs", 2).exit_code == 0
        assert ((tmp_path / "serial" / "manifest.json").read_bytes()
                == (tmp_path / "parallel" / "manifest.json").read_bytes())

    def test_invalid_config(self, config_file, tmp_path):
        path = config_file({**SMALL, "problem": {"radii": [0.5]}})
        assert invoke("solve", "--config", path, "--out", tmp_path / "out").exit_code == EXIT_INVALID

    def test_config_or_preset_required(self, config_file, tmp_path):
        assert invoke("solve", "--out", tmp_path / "out").exit_code == EXIT_INVALID
        result = invoke("solve", "--config", config_file(), "--preset", "laplace2d", "--out", tmp_path / "out")
        assert result.exit_code == EXIT_INVALID

    def test_unknown_preset(self, tmp_path):
        assert invoke("solve", "--preset", "poisson", "--out", tmp_path / "out").exit_code == EXIT_INVALID

    def test_stagnation_maps_to_non_convergence(self, config_file, tmp_path, mocker):
        mocker.patch("obstacle_mvs.main.SweepRunner.solve_all",
                     side_effect=SolverStagnationError("정체", [1.0, 1.0]))
        result = invoke("solve", "--config", config_file(), "--out", tmp_path / "out")
        assert result.exit_code == EXIT_NONCONVERGENCE

    def test_unconverged_radius(self, config_file, tmp_path, mocker):
        mocker.patch("obstacle_mvs.main.SweepRunner.solve_all",
                     return_value=RunOutcome(converged=False, failing_radii=[0.25]))
        result = invoke("solve", "--config", config_file(), "--out", tmp_path / "out")
        assert result.exit_code == EXIT_NONCONVERGENCE


class TestVerify:
    def test_no_suites(self, config_file, tmp_path):
        out = tmp_path / "out"
        assert invoke("verify", "--config", config_file(), "--out", out).exit_code == 0
        report = json.loads((out / "report.json").read_text(encoding="utf-8"))
        assert report["suites"] == {}
        assert report["passed"] is True

    def test_solver_suites_pass(self, config_file, tmp_path):
        data = {**SMALL, "suites": {"comparison": True, "penalty_orderings": True, "cross_solver": True,
                                    "truncation": True}}
        out = tmp_path / "out"
        result = invoke("verify", "--config", config_file(data), "--out", out)
        assert result.exit_code == 0, result.output
        report = json.loads((out / "report.json").read_text(encoding="utf-8"))
        assert list(report["suites"]) == ["truncation", "comparison", "penalty_orderings", "cross_solver"]
        assert all(s["passed"] for s in report["suites"].values())
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["suite_verdicts"]["comparison"] is True

    @pytest.mark.slow
    def test_monotone_average_three_dimensions(self, config_file, tmp_path):
        data = {"name": "cube", "grid": {"dim": 3, "M": 1.0, "h": 1 / 16},
                "problem": {"radii": [0.1875, 0.25]}, "suites": {"monotone_average": True}}
        out = tmp_path / "out"
        result = invoke("verify", "--config", config_file(data), "--out", out)
        assert result.exit_code == 0, result.output
        suite = json.loads((out / "report.json").read_text(encoding="utf-8"))["suites"]["monotone_average"]
        assert suite["passed"] is True
        pole = suite["data"]["pole-super"]
        assert suite["data"]["pole"]["node"][0] > 16
        assert pole["weighted_violations"] == [] and len(pole["curve"]["weighted"]) == 2
        header = (out / "curves" / "average_curve_pole-super.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header == "R,measure,average,weighted"

    def test_growth_solves_larger_set(self, config_file, tmp_path):
        data = {"name": "fine", "grid": {"dim": 2, "M": 1.0, "h": 1 / 64},
                "problem": {"radii": [0.125, 0.25]}, "suites": {"growth": True}}
        out = tmp_path / "out"
        result = invoke("verify", "--config", config_file(data), "--out", out)
        assert result.exit_code == 0, result.output
        suite = json.loads((out / "report.json").read_text(encoding="utf-8"))["suites"]["growth"]
        assert suite["data"]["extra_solve"] is True
        assert suite["data"]["R"] == pytest.approx(0.5 * np.sqrt(np.pi))
        assert suite["passed"] is True

    @pytest.mark.parametrize("suites, code", [
        ({"nesting": SuiteResult(passed=False)}, EXIT_SUITE_FAILURE),
        ({"truncation": SuiteResult(passed=False, inconclusive=True)}, EXIT_INCONCLUSIVE),
        ({"nesting": SuiteResult(passed=False), "truncation": SuiteResult(passed=False, inconclusive=True)},
         EXIT_SUITE_FAILURE),
    ])
    def test_exit_codes(self, config_file, tmp_path, mocker, suites, code):
        mocker.patch("obstacle_mvs.main.SweepRunner.verify", return_value=RunOutcome(converged=True, suites=suites))
        assert invoke("verify", "--config", config_file(), "--out", tmp_path / "out").exit_code == code


class TestExportSvg:
    def test_missing_artifacts(self, config_file, tmp_path):
        result = invoke("export-svg", "--R", 0.25, "--config", config_file(), "--out", tmp_path / "out")
        assert result.exit_code == EXIT_INVALID

    def test_after_solve(self, config_file, tmp_path):
        path, out = config_file(), tmp_path / "out"
        assert invoke("solve", "--config", path, "--out", out).exit_code == 0
        assert invoke("export-svg", "--R", 0.25, "--config", path, "--out", out).exit_code == 0
        svg = (out / "svg" / "set_R0.25.svg").read_text(encoding="utf-8")
        assert 'id="r-in"' in svg and 'id="r-out"' in svg

    def test_three_dimensions(self, config_file, tmp_path):
        data = {"name": "cube", "grid": {"dim": 3, "M": 1.0, "h": 1 / 8}, "problem": {"radii": [0.25]}}
        result = invoke("export-svg", "--R", 0.25, "--config", config_file(data), "--out", tmp_path / "out")
        assert result.exit_code == EXIT_INVALID


def test_version():
    assert invoke("version").exit_code == 0
