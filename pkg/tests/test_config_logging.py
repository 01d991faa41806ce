"""
Tests for evaluation options, the settings file, structured logging and the
error hierarchy.
"""

import json

import pytest
from pydantic import ValidationError

from lommelkit.core.config import EvalOptions, Settings, load_settings
from lommelkit.core.errors import (
    BoundViolation,
    DomainError,
    LommelError,
    NonConvergence,
    NormalizationPole,
    UnknownBoundId,
)
from lommelkit.core.logging import configure_logging, get_logger


class TestEvalOptions:
    def test_defaults(self):
        opts = EvalOptions()
        assert opts.rel_tol == 1e-15
        assert opts.max_terms == 10_000
        assert opts.scaling_threshold == 50.0
        assert not opts.oracle_mode

    @pytest.mark.parametrize("changes", [
        {"rel_tol": 0.0},
        {"rel_tol": 1e-3},
        {"max_terms": 8},
        {"scaling_threshold": -1.0},
        {"unknown": 1},
    ])
    def test_validation(self, changes):
        with pytest.raises(ValidationError):
            EvalOptions(**changes)

    def test_frozen(self):
        with pytest.raises(ValidationError):
            EvalOptions().rel_tol = 1e-10

    def test_replace_validates(self):
        opts = EvalOptions().replace(oracle_mode=True, oracle_dps=60)
        assert opts.oracle_mode and opts.oracle_dps == 60
        with pytest.raises(ValidationError):
            opts.replace(max_terms=1)

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("LOMMEL_MAX_TERMS", "500")
        monkeypatch.setenv("LOMMEL_REL_TOL", "1e-12")
        monkeypatch.setenv("LOMMEL_SCALING_THRESHOLD", "")
        opts = EvalOptions.from_env({"max_terms": 20})
        assert opts.max_terms == 500
        assert opts.rel_tol == 1e-12
        assert opts.scaling_threshold == 50.0


class TestSettings:
    def test_defaults_without_file(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        settings = load_settings()
        assert settings == Settings()
        assert settings.sweep.seed == 42
        assert settings.sweep.samples == 10_000

    def test_yaml_file(self, tmp_path, monkeypatch):
        path = tmp_path / "lommel.yaml"
        path.write_text(
            "eval:\n  rel_tol: 1.0e-13\n  max_terms: 2000\n"
            "sweep:\n  seed: 7\n  workers: 4\n"
            "logging:\n  level: DEBUG\n",
            encoding="utf-8",
        )
        monkeypatch.setenv("LOMMEL_MAX_TERMS", "300")
        settings = load_settings(str(path))
        assert settings.eval.rel_tol == 1e-13
        assert settings.eval.max_terms == 300
        assert settings.sweep.seed == 7
        assert settings.sweep.workers == 4
        assert settings.sweep.x_max == 60.0
        assert settings.log_level == "DEBUG"

    def test_default_file_in_cwd(self, tmp_path, monkeypatch):
        (tmp_path / ".lommelkit.yaml").write_text("sweep:\n  samples: 50\n", encoding="utf-8")
        monkeypatch.chdir(tmp_path)
        assert load_settings().sweep.samples == 50

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("", encoding="utf-8")
        assert load_settings(str(path)) == Settings()

    def test_missing_explicit_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_settings(str(tmp_path / "absent.yaml"))

    def test_empty_path(self):
        with pytest.raises(ValueError, match="cannot be empty"):
            load_settings("  ")

    def test_invalid_eval_section(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("eval:\n  rel_tol: 0.1\n", encoding="utf-8")
        with pytest.raises(ValidationError):
            load_settings(str(path))


class TestLogging:
    """JSON events through the rotating file handler"""

    @pytest.fixture(autouse=True)
    def restore(self):
        yield
        configure_logging("ERROR")

    def test_file_logging_writes_json_lines(self, tmp_path):
        configure_logging("INFO", log_dir=str(tmp_path), enable_file_logging=True, enable_console_logging=False)
        get_logger("lommelkit.tests").info("sweep_started", seed=3, points=10)
        get_logger("lommelkit.tests").debug("below_threshold")

        lines = (tmp_path / "lommelkit.log").read_text(encoding="utf-8").splitlines()
        records = [json.loads(line) for line in lines]
        assert [r["event"] for r in records] == ["sweep_started"]
        assert records[0]["level"] == "info"
        assert records[0]["seed"] == 3
        assert "timestamp" in records[0]

    def test_level_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LOMMEL_LOG_LEVEL", "debug")
        configure_logging(log_dir=str(tmp_path), enable_file_logging=True, enable_console_logging=False)
        get_logger("lommelkit.tests").debug("series_terms", terms=12)
        text = (tmp_path / "lommelkit.log").read_text(encoding="utf-8")
        assert "series_terms" in text

    def test_console_goes_to_stderr(self, capsys):
        configure_logging("WARNING")
        get_logger("lommelkit.tests").warning("bound_violation", entry_id="RATIO_BRACKET")
        captured = capsys.readouterr()
        assert captured.out == ""
        assert json.loads(captured.err.strip().splitlines()[-1])["entry_id"] == "RATIO_BRACKET"


class TestErrors:
    @pytest.mark.parametrize("error,code", [
        (LommelError("x"), 1),
        (DomainError("x"), 2),
        (NormalizationPole("x"), 2),
        (UnknownBoundId("x"), 2),
        (NonConvergence("x"), 3),
        (BoundViolation("x"), 4),
    ])
    def test_exit_codes(self, error, code):
        assert error.exit_code == code

    def test_domain_error_is_value_error(self):
        assert isinstance(DomainError("x"), ValueError)
        assert isinstance(NormalizationPole("x"), DomainError)

    def test_unknown_bound_message_is_not_quoted(self):
        assert str(UnknownBoundId("unknown bound id 'X'")) == "unknown bound id 'X'"

    def test_nonconvergence_diagnostics(self):
        exc = NonConvergence("budget exhausted", terms_used=16, tail_bound=1e-3)
        assert exc.terms_used == 16
        assert exc.tail_bound == 1e-3
        assert isinstance(exc, ArithmeticError)
