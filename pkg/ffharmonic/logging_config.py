"""
Logging configuration for the verifier.
"""
import logging
import sys
from typing import TextIO

PACKAGE_LOGGERS = ("ffharmonic", "services")


def configure_logging(level: int = logging.INFO, format_string: str | None = None, stream: TextIO | None = None) -> None:
    """
    Configure logging for the math core and the orchestration services.

    Safe to call multiple times: later calls update the level of the handlers
    that already exist. A given stream replaces them with one fresh handler
    on that stream.

    Args:
        level: Logging level (e.g., logging.DEBUG, logging.INFO)
        format_string: Custom format string for log messages. If None, uses default format.
        stream: Where new handlers write, stdout unless given

    Example:
        >>> from ffharmonic.logging_config import configure_logging
        >>> import logging
        >>> configure_logging(level=logging.DEBUG)
    """
    if format_string is None:
        format_string = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    for name in PACKAGE_LOGGERS:
        package_logger = logging.getLogger(name)
        package_logger.setLevel(level)

        if stream is not None:
            for handler in list(package_logger.handlers):
                package_logger.removeHandler(handler)

        if not package_logger.handlers:
            handler = logging.StreamHandler(stream or sys.stdout)
            handler.setLevel(level)
            handler.setFormatter(logging.Formatter(format_string))
            package_logger.addHandler(handler)
        else:
            for handler in package_logger.handlers:
                handler.setLevel(level)


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance.

    Args:
        name: Name for the logger (typically __name__)

    Returns:
        Logger instance under one of the configured package loggers
    """
    return logging.getLogger(name)
