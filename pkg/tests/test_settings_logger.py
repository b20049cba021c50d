# tests/test_settings_logger.py
"""
Pruebas de la configuración y del logger.
"""

import logging

import pytest

from config.settings import Settings
from src.core.logger import log_function_call, logger, setup_logger


# ---------- Fixtures ----------

ENV_KEYS = ("ARTOWEN_SEED", "ARTOWEN_BIT_DEPTH", "ARTOWEN_WORKERS", "SCAN_TOP_K", "LOG_LEVEL")


@pytest.fixture
def clean_env(monkeypatch):
    for key in ENV_KEYS:
        monkeypatch.delenv(key, raising=False)
    return monkeypatch


# ---------- Tests ----------

def test_defaults(clean_env):
    s = Settings(_env_file=None)
    assert s.default_seed == 20240521
    assert s.bit_depth == 32
    assert s.scan_chunk_log2 == 16
    assert s.workers == 1


def test_env_override(clean_env):
    clean_env.setenv("ARTOWEN_SEED", "7")
    clean_env.setenv("SCAN_TOP_K", "25")
    s = Settings(_env_file=None)
    assert s.default_seed == 7
    assert s.scan_top_k == 25


def test_logger_is_shared():
    assert setup_logger() is logger
    assert logger.name == "artowen"


def test_log_function_call_reraises(caplog):
    @log_function_call
    def broken():
        raise RuntimeError("fallo")

    with caplog.at_level(logging.ERROR, logger="artowen"):
        with pytest.raises(RuntimeError):
            broken()
    assert "Error en función broken: fallo" in caplog.text


def test_log_function_call_passes_result():
    @log_function_call
    def add(a, b):
        return a + b

    assert add(2, b=3) == 5
    assert add.__name__ == "add"
