"""Tests for the stderr log sinks."""

import pytest
from loguru import logger

from chainopuc.logger_config import configure_logging


@pytest.fixture(autouse=True)
def restore_sink():
    yield
    configure_logging(False)


def test_verbose_records_carry_command(capsys):
    configure_logging(True, "zeros")
    logger.debug("bisecting level 3")
    captured = capsys.readouterr()
    assert captured.out == ""
    line = captured.err.splitlines()[-1]
    assert "| zeros |" in line
    assert "DEBUG" in line
    assert line.endswith("bisecting level 3")


def test_concise_sink_hides_debug(capsys):
    configure_logging(False, "check")
    logger.debug("hidden")
    logger.warning("Check interlacing failed")
    err = capsys.readouterr().err
    assert "hidden" not in err
    assert "WARNING: Check interlacing failed" in err
