"""
Logging configuration for Sparse VCH Control.

Every module logs through a child of the ``vch_control`` logger; the CLI
configures the handler and level once per process.
"""

import logging
import sys
from typing import Optional

ROOT_LOGGER = "vch_control"


def get_logger(name: Optional[str] = None, level: Optional[str] = None) -> logging.Logger:
    """
    Get a configured logger instance.

    Args:
        name: Logger name (defaults to 'vch_control')
        level: Optional level name applied to the logger ("DEBUG", "INFO", ...)

    Returns:
        Configured logger instance
    """
    logger_name = name or ROOT_LOGGER
    logger = logging.getLogger(logger_name)

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.setLevel(logging.INFO)

    if level is not None:
        logger.setLevel(level.upper())

    return logger


# Default logger instance
logger = get_logger()
