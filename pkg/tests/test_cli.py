"""CLI contract tests: output shape, determinism, exit codes, caching.

Most invocations run in-process through ``cli.main`` for speed; one test
drives the installed console entry point end to end.  Green-backed
subcommands use a reduced evaluator (--k1/--box-radius/--n-renewal) and
share a session cache directory, so only the first call pays the build.
"""

import csv
import io
import json
import subprocess
import sys

import pytest

from subwalk import SolverError, cli

SMALL = ["--k1", "64", "--box-radius", "48", "--n-renewal", "2048"]


def run_cli(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCoeffs:
    def test_json_document(self, capsys, cli_env):
        code, out, _ = run_cli(capsys, ["coeffs", "--alpha", "1.0", "--n", "6"])
        assert code == 0
        doc = json.loads(out)
        assert doc["rows"][0] == {"n": 1, "c": 0.5, "partial_sum": 0.5}
        man = doc["manifest"]
        assert man["subcommand"] == "coeffs"
        assert man["timestamp"] is None
        assert man["parameters"]["alpha"] == 1.0

    def test_csv_document(self, capsys, cli_env):
        code, out, _ = run_cli(capsys, ["coeffs", "--alpha", "0.5", "--n", "4",
                                        "--format", "csv"])
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["n", "c", "partial_sum"]
        assert float(rows[1][1]) == 0.25

    def test_stdout_reruns_identical(self, capsys, cli_env):
        _, out1, _ = run_cli(capsys, ["coeffs", "--alpha", "1.5", "--n", "9"])
        _, out2, _ = run_cli(capsys, ["coeffs", "--alpha", "1.5", "--n", "9"])
        assert out1 == out2

    def test_out_file_is_stamped(self, capsys, cli_env, tmp_path):
        target = tmp_path / "c.json"
        code, out, _ = run_cli(capsys, ["coeffs", "--alpha", "1.0", "--n", "3",
                                        "--out", str(target)])
        assert code == 0
        assert json.loads(out)["manifest"]["timestamp"] is None
        ondisk = json.loads(target.read_text())
        assert ondisk["manifest"]["timestamp"] is not None
        assert ondisk["rows"] == json.loads(out)["rows"]


class TestGreenAndRiesz:
    def test_green_value_with_bound(self, capsys, cli_env):
        code, out, _ = run_cli(capsys, ["green", "--alpha", "1.0",
                                        "--x", "5,0,0"] + SMALL)
        assert code == 0
        doc = json.loads(out)
        assert doc["value"] == pytest.approx(0.0051435322572056606, rel=5e-3)
        assert 0 < doc["error_bound"] < 0.05 * doc["value"]
        assert set(doc["parts"]) == {"exact", "gaussian", "tail"}

    def test_green_cache_round_trip(self, capsys, cli_env):
        import time
        t0 = time.time()
        run_cli(capsys, ["green", "--alpha", "1.0", "--x", "1,1,0"] + SMALL)
        warm = time.time() - t0
        assert warm < 30.0
        t0 = time.time()
        code, out, _ = run_cli(capsys, ["green", "--alpha", "1.0",
                                        "--x", "1,1,0"] + SMALL)
        assert time.time() - t0 < 5.0
        assert code == 0

    def test_riesz_reports_both_constants(self, capsys, cli_env):
        code, out, _ = run_cli(capsys, ["riesz", "--alpha", "1.0",
                                        "--radii", "20,30"] + SMALL)
        assert code == 0
        doc = json.loads(out)
        alg = doc["algebraic"]
        assert alg["discrepancy_flag"] is True
        assert alg["(2d)^(-alpha/2)"] == pytest.approx(0.4082482904638631)
        assert alg["(2/d)^(alpha/2)"] == pytest.approx(0.8164965809277260)


class TestCapacityWienerThorn:
    def test_capacity_ball(self, capsys, cli_env):
        code, out, _ = run_cli(capsys, ["capacity", "--alpha", "1.0",
                                        "--set", "ball:2"] + SMALL)
        assert code == 0
        doc = json.loads(out)
        assert doc["method"] == "dense"
        assert doc["n_points"] == 33
        assert doc["capacity"] == pytest.approx(13.756, rel=0.02)

    def test_capacity_points_literal(self, capsys, cli_env):
        code, out, _ = run_cli(capsys, ["capacity", "--alpha", "1.0",
                                        "--set", "points:0,0,0;1,0,0"] + SMALL)
        assert code == 0
        assert json.loads(out)["n_points"] == 2

    def test_capacity_from_file(self, capsys, cli_env, tmp_path):
        f = tmp_path / "pts.txt"
        f.write_text("0 0 0\n2 0 0\n")
        code, out, _ = run_cli(capsys, ["capacity", "--alpha", "1.0",
                                        "--set", f"file:{f}"] + SMALL)
        assert code == 0
        assert json.loads(out)["n_points"] == 2

    def test_wiener_axis(self, capsys, cli_env):
        code, out, _ = run_cli(capsys, ["wiener", "--alpha", "1.0",
                                        "--set", "axis", "--kmin", "1",
                                        "--kmax", "4"] + SMALL)
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "ConvergesLikely"
        assert len(doc["rows"]) == 4

    def test_thorn_classifier(self, capsys, cli_env):
        code, out, _ = run_cli(capsys, ["thorn", "--profile", "linoverlog",
                                        "--beta", "2.0", "--alpha", "1.0"])
        assert code == 0
        assert json.loads(out)["verdict"] == "non-massive"

    def test_hyperplane_growth(self, capsys, cli_env):
        code, out, _ = run_cli(capsys, ["hyperplane", "--alpha", "1.0",
                                        "--epsilons", "1e-3,1e-4,1e-5"])
        assert code == 0
        doc = json.loads(out)
        assert doc["classification"].startswith("massive")
        assert doc["growth_per_decade"] == pytest.approx(1.795, abs=0.02)


class TestSimulate:
    ARGS = ["simulate", "--alpha", "1.0", "--set", "ball:2",
            "--start", "5,0,0", "--trials", "1500", "--seed", "7",
            "--stopping", "horizon:50000"]

    def test_deterministic_stdout(self, capsys, cli_env):
        _, out1, _ = run_cli(capsys, self.ARGS)
        _, out2, _ = run_cli(capsys, self.ARGS)
        assert out1 == out2
        doc = json.loads(out1)
        assert doc["hits"] + doc["exhausted_trials"] == 1500
        assert doc["manifest"]["seed"] == 7

    def test_escape_stopping_parse(self, capsys, cli_env):
        code, out, _ = run_cli(capsys, ["simulate", "--alpha", "1.0",
                                        "--set", "ball:2", "--start", "7,0,0",
                                        "--trials", "300", "--seed", "1",
                                        "--stopping", "escape:48"])
        assert code == 0
        assert json.loads(out)["stopping"] == "escape:48"


class TestExitCodes:
    def test_domain_error_is_2(self, capsys, cli_env):
        code, _, err = run_cli(capsys, ["coeffs", "--alpha", "2.5", "--n", "5"])
        assert code == 2
        assert "domain error" in err

    def test_unknown_set_is_2(self, capsys, cli_env):
        code, _, err = run_cli(capsys, ["capacity", "--alpha", "1.0",
                                        "--set", "blob:9"] + SMALL)
        assert code == 2

    def test_budget_error_is_3(self, capsys, cli_env):
        code, _, err = run_cli(capsys, ["capacity", "--alpha", "1.0",
                                        "--set", "ball:8", "--method", "lp"]
                               + SMALL)
        assert code == 3
        assert "budget exceeded" in err

    def test_solver_error_is_4(self, capsys, cli_env, monkeypatch):
        def boom(*a, **k):
            raise SolverError("no convergence")
        monkeypatch.setattr(cli, "hyperplane_return_sum", boom)
        code, _, err = run_cli(capsys, ["hyperplane", "--alpha", "1.0"])
        assert code == 4
        assert "solver failure" in err

    def test_recurrent_regime_rejected(self, capsys, cli_env):
        code, _, err = run_cli(capsys, ["green", "--alpha", "1.5",
                                        "--dim", "1", "--x", "3"])
        assert code == 2
        assert "recurrent" in err


def test_console_entry_point(cli_env):
    p = subprocess.run([sys.executable, "-m", "subwalk.cli", "coeffs",
                        "--alpha", "1.0", "--n", "3"],
                       capture_output=True, text=True, env=cli_env)
    assert p.returncode == 0
    assert json.loads(p.stdout)["rows"][0]["c"] == 0.5
    p = subprocess.run([sys.executable, "-m", "subwalk.cli", "--version"],
                       capture_output=True, text=True, env=cli_env)
    assert p.returncode == 0
