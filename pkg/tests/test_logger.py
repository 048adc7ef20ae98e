"""
Tests for logging setup.
"""
import logging

import pytest

from ladderlab.utils.logger import PACKAGE_LOGGER, get_logger, setup_logging


@pytest.fixture
def package_logger():
    yield logging.getLogger(PACKAGE_LOGGER)
    setup_logging("WARNING", console=False)


def test_module_loggers_nest_under_package():
    assert get_logger("ladderlab.numerics.oracle").name == "ladderlab.numerics.oracle"
    assert get_logger("scratch").name == "ladderlab.scratch"


def test_unknown_level_falls_back(package_logger):
    setup_logging("chatty")
    assert package_logger.level == logging.WARNING
    assert len(package_logger.handlers) == 1


def test_repeated_setup_replaces_handlers(package_logger):
    setup_logging("INFO")
    setup_logging("DEBUG")
    assert len(package_logger.handlers) == 1
    assert package_logger.level == logging.DEBUG


def test_log_file_gets_debug_records(package_logger, tmp_path):
    path = tmp_path / "logs" / "run.log"
    setup_logging("ERROR", log_file=str(path), console=False)
    get_logger("ladderlab.tests").debug("oracle refined")
    for handler in package_logger.handlers:
        handler.flush()
    assert "[DEBUG] ladderlab.tests: oracle refined" in path.read_text(encoding="utf-8")
