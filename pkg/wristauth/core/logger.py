"""
Logging configuration for WristAuth

Diagnostics go to stderr and, optionally, a rotating file. stdout is left
to the command output so scripts can read reports and verify results.
"""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Optional, Union

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Third-party loggers that are too verbose below WARNING
QUIET_LOGGERS = ("numba",)

_OWNED = "_wristauth_handler"


def resolve_level(level: Union[str, int]) -> int:
    """
    Convert a level name or number into a logging level

    Args:
        level: Level name (DEBUG, INFO, WARNING, ERROR, CRITICAL) or number

    Returns:
        Numeric logging level
    """
    if isinstance(level, int):
        return level
    numeric = logging.getLevelName(str(level).upper())
    if not isinstance(numeric, int):
        raise ValueError(f"unknown logging level: {level!r}")
    return numeric


def _own(handler: logging.Handler, level: int, formatter: logging.Formatter) -> logging.Handler:
    handler.setLevel(level)
    handler.setFormatter(formatter)
    setattr(handler, _OWNED, True)
    return handler


def setup_logging(
    level: Union[str, int] = "INFO",
    log_file: Optional[str] = None,
    log_format: Optional[str] = None,
    max_file_size_mb: int = 10,
    backup_count: int = 5
):
    """
    Setup logging configuration

    Calling it again replaces the handlers installed by the previous call
    and leaves any other root handlers in place.

    Args:
        level: Logging level name or number
        log_file: Path to a rotating log file, or None for console only
        log_format: Log message format
        max_file_size_mb: Maximum log file size in MB
        backup_count: Number of rotated files to keep
    """
    numeric_level = resolve_level(level)
    formatter = logging.Formatter(log_format or DEFAULT_FORMAT)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    for handler in [h for h in root_logger.handlers if getattr(h, _OWNED, False)]:
        root_logger.removeHandler(handler)
        handler.close()

    root_logger.addHandler(_own(logging.StreamHandler(sys.stderr), numeric_level, formatter))

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            log_path,
            maxBytes=max_file_size_mb * 1024 * 1024,
            backupCount=backup_count,
            encoding='utf-8'
        )
        root_logger.addHandler(_own(file_handler, numeric_level, formatter))

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(max(numeric_level, logging.WARNING))

    logging.getLogger(__name__).debug(
        f"Logging configured - Level: {logging.getLevelName(numeric_level)}, File: {log_file or 'None'}"
    )


def get_logger(name: str) -> logging.Logger:
    """Logger for a module, normally called with __name__"""
    return logging.getLogger(name)


class LoggerMixin:
    """Gives a class a `logger` named after its module and class"""

    @property
    def logger(self) -> logging.Logger:
        cls = type(self)
        return logging.getLogger(f"{cls.__module__}.{cls.__qualname__}")
