"""
Logging setup shared by the package.

Modules create child loggers with ``Logger(service=SERVICE_NAME, child=True)``;
the command-line front end configures the parent once via ``configure_logger``.
"""
import logging
import os
import sys
from typing import Optional

from aws_lambda_powertools import Logger

SERVICE_NAME = "oblivroute"
LOG_LEVEL_ENV = "OBLIVROUTE_LOG_LEVEL"

_root: Optional[Logger] = None


def configure_logger(level: Optional[str] = None) -> Logger:
    """
    Create (or reconfigure) the parent logger.

    Records are emitted as JSON lines on standard error so that standard
    output stays reserved for data.

    Args:
        level: Log level name; falls back to OBLIVROUTE_LOG_LEVEL, then INFO

    Returns:
        The parent powertools Logger
    """
    global _root
    resolved = (level or os.environ.get(LOG_LEVEL_ENV) or "INFO").upper()
    if _root is None:
        _root = Logger(
            service=SERVICE_NAME,
            level=resolved,
            logger_handler=logging.StreamHandler(sys.stderr),
        )
    else:
        _root.setLevel(resolved)
    return _root
