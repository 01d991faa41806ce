"""Shared fixtures for the lommelkit test suite."""

import pytest

from lommelkit.core.config import EvalOptions
from lommelkit.core.logging import configure_logging
from lommelkit.modules.evaluation.backend import Backend


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    """Keep library warnings out of the test output unless a test asks for them."""
    configure_logging("ERROR")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in ("LOMMEL_MAX_TERMS", "LOMMEL_REL_TOL", "LOMMEL_SCALING_THRESHOLD", "LOMMEL_LOG_LEVEL"):
        monkeypatch.delenv(var, raising=False)


@pytest.fixture
def opts():
    return EvalOptions()


@pytest.fixture
def oracle_opts():
    return EvalOptions(oracle_mode=True)


@pytest.fixture
def backend(oracle_opts):
    return Backend(oracle_opts)
