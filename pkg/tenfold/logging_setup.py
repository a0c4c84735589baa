"""
loguru sink configuration for the command-line entry point
"""
import sys

from loguru import logger

from .config import Settings


def configure_logging(settings: Settings, verbose: bool = False) -> None:
    """Route logs to stderr (and optionally a rotated file); stdout stays reserved for results"""
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else settings.log_level)
    if settings.log_file:
        logger.add(settings.log_file, rotation="10 MB", level="DEBUG")
