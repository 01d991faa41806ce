"""
End-to-end tests for the lommelkit command line.

Covers:
1. eval: values, scaled output, error exit codes
2. bound: key=value report, domain line, manifest, violation exit code
3. table: CSV output and summary
4. verify: clean run and a run with a corrupted bound
5. asym and the global options
"""

import json
import math

import pytest
from click.testing import CliRunner

from lommelkit.cli import main
from lommelkit.core.logging import configure_logging
from lommelkit.modules.evaluation.backend import Backend

pytestmark = pytest.mark.integration


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(autouse=True)
def restore_logging():
    yield
    # the CLI points the root handler at the runner's stderr
    configure_logging("ERROR")


def _report(output: str) -> dict:
    pairs = (line.split("=", 1) for line in output.splitlines() if "=" in line and " " not in line)
    return {key: value for key, value in pairs}


class TestEval:
    def test_b_at_small_argument(self, runner):
        result = runner.invoke(main, ["eval", "--fn", "b", "--mu", "2", "--nu", "0", "--x", "1e-9"])
        assert result.exit_code == 0, result.output
        assert float(result.stdout) == pytest.approx(1.5, abs=1e-9)

    def test_struve_half_order(self, runner):
        result = runner.invoke(main, ["eval", "--fn", "t_tilde", "--mu", "0.5", "--nu", "0.5", "--x", "1"])
        assert result.exit_code == 0, result.output
        expected = math.sqrt(2.0 / math.pi) * (math.cosh(1.0) - 1.0)
        assert float(result.stdout) == pytest.approx(expected, rel=1e-13)

    def test_scaled_output(self, runner):
        result = runner.invoke(main, ["eval", "--fn", "i", "--nu", "0", "--x", "800", "--scaled"])
        assert result.exit_code == 0, result.output
        value, log_scale = (float(v) for v in result.stdout.strip().split(","))
        assert log_scale == 800.0
        assert value == pytest.approx(1.0 / math.sqrt(2.0 * math.pi * 800.0), rel=1e-3)

    def test_oracle_flag(self, runner):
        plain = runner.invoke(main, ["eval", "--fn", "l", "--nu", "1", "--x", "3"])
        oracle = runner.invoke(main, ["eval", "--fn", "l", "--nu", "1", "--x", "3", "--oracle"])
        assert float(plain.stdout) == pytest.approx(float(oracle.stdout), rel=1e-13)

    def test_domain_error_exit_code(self, runner):
        result = runner.invoke(main, ["eval", "--fn", "i", "--nu", "0", "--x", "0"])
        assert result.exit_code == 2
        assert "error:" in result.output

    def test_nonconvergence_exit_code(self, runner, monkeypatch):
        monkeypatch.setenv("LOMMEL_MAX_TERMS", "16")
        result = runner.invoke(main, ["eval", "--fn", "i", "--nu", "0", "--x", "100"])
        assert result.exit_code == 3

    def test_invalid_tolerance(self, runner):
        result = runner.invoke(main, ["eval", "--fn", "i", "--nu", "0", "--x", "1", "--tol", "0.5"])
        assert result.exit_code == 2


class TestBound:
    def test_ratio_bracket(self, runner):
        result = runner.invoke(main, ["bound", "--id", "RATIO_BRACKET", "--mu", "2", "--nu", "0", "--x", "2.5"])
        assert result.exit_code == 0, result.output
        report = _report(result.stdout)
        assert report["entry_id"] == "RATIO_BRACKET"
        assert float(report["margin_lower"]) > 0.0
        assert float(report["margin_upper"]) > 0.0
        assert report["equality_hit"] == "false"

    def test_domain_line(self, runner):
        result = runner.invoke(main, ["bound", "--id", "RATIO_SQRT", "--mu", "0.4", "--nu", "0.5", "--x", "1"])
        assert result.exit_code == 0, result.output
        assert "domain: upper: valid, lower: valid" in result.stdout

    def test_ratio_in_x(self, runner):
        args = ["bound", "--id", "XY_BESSEL", "--mu", "2", "--nu", "1", "--x", "1", "--y", "2"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        assert _report(result.stdout)["upper"] != "none"

    def test_manifest(self, runner):
        result = runner.invoke(main, ["bound", "--manifest"])
        assert result.exit_code == 0
        assert len(json.loads(result.stdout)) == 36

        single = runner.invoke(main, ["bound", "--manifest", "--id", "BPSTU"])
        record = json.loads(single.stdout)
        assert record["id"] == "BPSTU"
        assert record["equality"] == "nu = -1/2"

    @pytest.mark.parametrize("args", [
        ["bound", "--id", "NOPE", "--mu", "1", "--nu", "0", "--x", "1"],
        ["bound", "--id", "RATIO_BRACKET", "--mu", "2", "--nu", "5", "--x", "1"],
        ["bound", "--id", "RATIO_BRACKET"],
    ])
    def test_usage_and_domain_errors(self, runner, args):
        assert runner.invoke(main, args).exit_code == 2

    def test_violation_exit_code(self, runner, monkeypatch):
        original = Backend.a
        monkeypatch.setattr(Backend, "a", lambda self, mu, nu, x: -original(self, mu, nu, x))
        args = ["bound", "--id", "CROSS_UB_A", "--mu", "2", "--nu", "0.5", "--x", "4"]
        result = runner.invoke(main, args)
        assert result.exit_code == 4
        assert "violated on the upper side" in result.output


class TestTable:
    def test_writes_csv(self, runner, tmp_path):
        out = tmp_path / "table5.csv"
        result = runner.invoke(main, ["table", "--id", "5", "--out", str(out)])
        assert result.exit_code == 0, result.output
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "param,x,relerr_computed,relerr_reference,pass"
        assert len(lines) == 51
        assert all(line.endswith(",true") for line in lines[1:])
        assert "table=5 cells=50 failures=0" in result.stdout

    def test_unknown_table(self, runner):
        assert runner.invoke(main, ["table", "--id", "9"]).exit_code == 2


class TestVerify:
    def test_clean_run(self, runner):
        result = runner.invoke(main, ["verify", "--seed", "3", "--samples", "36", "--identity-samples", "3"])
        assert result.exit_code == 0, result.output
        assert result.stdout.splitlines()[-1] == "ok"
        assert "sweep seed=3 points=36" in result.stdout

    def test_corrupted_bound_is_caught(self, runner, monkeypatch):
        original = Backend.a
        monkeypatch.setattr(Backend, "a", lambda self, mu, nu, x: -original(self, mu, nu, x))
        result = runner.invoke(main, ["verify", "--seed", "3", "--samples", "36", "--identity-samples", "1"])
        assert result.exit_code == 4
        assert "violation CROSS_UB_A upper" in result.output

    def test_settings_file(self, runner, tmp_path):
        config = tmp_path / "settings.yaml"
        config.write_text("sweep:\n  seed: 5\n  samples: 12\n", encoding="utf-8")
        args = ["--config", str(config), "verify", "--identity-samples", "1"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        assert "sweep seed=5 points=12" in result.stdout


class TestAsymAndGlobalOptions:
    def test_asym(self, runner):
        result = runner.invoke(main, ["asym", "--kind", "T_LARGE", "--mu", "1", "--nu", "0.5", "--x", "20", "--relerr"])
        assert result.exit_code == 0, result.output
        value, relerr = result.stdout.splitlines()
        assert float(value) == pytest.approx(math.exp(20.0) / math.sqrt(40.0 * math.pi), rel=1e-14)
        assert float(relerr.split("=")[1]) < 1e-6

    def test_asym_domain_error(self, runner):
        result = runner.invoke(main, ["asym", "--kind", "T_LARGE", "--mu", "0", "--nu", "1", "--x", "20"])
        assert result.exit_code == 2

    def test_version(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.output

    def test_missing_settings_file(self, runner, tmp_path):
        result = runner.invoke(main, ["--config", str(tmp_path / "absent.yaml"), "eval", "--fn", "i",
                                      "--nu", "0", "--x", "1"])
        assert result.exit_code == 2
