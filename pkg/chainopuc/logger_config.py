"""Loguru sinks for the chainopuc CLI.

stdout carries the JSON or CSV payload only, so every record goes to stderr.
"""

import sys
from typing import Optional

from loguru import logger

VERBOSE_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <7}</level> | "
    "<cyan>{extra[command]}</cyan> | {name}:{line} | <level>{message}</level>"
)
CONCISE_FORMAT = "<level>{level}</level>: {message}"


def configure_logging(verbose: bool = False, command: Optional[str] = None) -> None:
    """Replace the default sink: DEBUG with command and source location when verbose, else INFO."""
    logger.remove()
    logger.configure(extra={"command": command or "-"})
    if verbose:
        logger.add(sys.stderr, level="DEBUG", format=VERBOSE_FORMAT)
        logger.debug("Verbose logging enabled")
    else:
        logger.add(sys.stderr, level="INFO", format=CONCISE_FORMAT)
