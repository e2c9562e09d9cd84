"""
Tests for configuration profiles and logging setup
"""

import importlib
import logging
import os
from fractions import Fraction
from unittest.mock import patch

import pytest

from flagprolong import config
from flagprolong.cli import setup_logging


@pytest.fixture
def reload_config():
    """Reload config under a patched environment, restore afterwards."""

    def _reload(**env):
        with patch.dict(os.environ, env):
            return importlib.reload(config)

    yield _reload
    importlib.reload(config)


def test_thorough_profile(reload_config):
    cfg = reload_config(FLAGPROLONG_PROFILE="thorough")
    assert cfg.PROFILE == "thorough"
    assert cfg.VERIFY_DETERMINACY is True
    assert cfg.JACOBI_MAX_DIM == 120
    assert cfg.SAMPLE_STEP == Fraction(1, 7)


def test_fast_profile(reload_config):
    cfg = reload_config(FLAGPROLONG_PROFILE="fast")
    assert cfg.VERIFY_DETERMINACY is False
    assert cfg.JACOBI_MAX_DIM == 40
    assert cfg.SAMPLE_STEP == Fraction(1, 3)


def test_environment_overrides(reload_config):
    cfg = reload_config(
        FLAGPROLONG_PROFILE="thorough",
        FLAGPROLONG_JACOBI_MAX_DIM="7",
        FLAGPROLONG_MAX_DEGREE="5",
        FLAGPROLONG_SAMPLE_STEP="2/5",
    )
    assert cfg.JACOBI_MAX_DIM == 7
    assert cfg.DEFAULT_MAX_DEGREE == 5
    assert cfg.SAMPLE_STEP == Fraction(2, 5)


def test_profile_constants_reread_on_each_reload(reload_config):
    """Test an override in one reload does not leak into the next"""
    cfg = reload_config(FLAGPROLONG_PROFILE="fast", FLAGPROLONG_VERIFY_DETERMINACY="yes")
    assert cfg.VERIFY_DETERMINACY is True
    cfg = reload_config(FLAGPROLONG_PROFILE="fast")
    assert cfg.VERIFY_DETERMINACY is False
    cfg = reload_config(FLAGPROLONG_PROFILE="thorough", FLAGPROLONG_JACOBI_MAX_DIM="9")
    assert cfg.JACOBI_MAX_DIM == 9
    cfg = reload_config(FLAGPROLONG_PROFILE="thorough")
    assert cfg.JACOBI_MAX_DIM == 120


def test_setup_logging_writes_file(tmp_path):
    log_path = tmp_path / "flagprolong.log"
    setup_logging("INFO", str(log_path))

    logging.getLogger("flagprolong.test").info("Test info")
    logging.getLogger("flagprolong.test").error("Test error")
    for handler in logging.getLogger().handlers:
        handler.flush()

    content = log_path.read_text(encoding="utf-8")
    assert "flagprolong.test - INFO - Test info" in content
    assert "flagprolong.test - ERROR - Test error" in content
    setup_logging("WARNING", "")
