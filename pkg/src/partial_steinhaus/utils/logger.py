"""
Centralized logging configuration for partial_steinhaus.

Module loggers propagate to the root logger, which writes to stderr so that
stdout stays reserved for command output and structured documents.
"""

import logging
import sys
from pathlib import Path
from typing import Optional


DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def get_logger(
    name: str,
    level: Optional[int] = None,
    log_file: Optional[Path] = None,
    format_string: Optional[str] = None
) -> logging.Logger:
    """
    Get a logger instance.

    Args:
        name: Logger name (usually __name__)
        level: Optional level override; by default the root level applies
        log_file: Optional file path receiving a copy of the records
        format_string: Custom format string for the file handler

    Returns:
        Logger instance
    """
    logger = logging.getLogger(name)

    if level is not None:
        logger.setLevel(level)

    # Avoid duplicate handlers
    if log_file and not logger.handlers:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(format_string or DEFAULT_FORMAT))
        logger.addHandler(file_handler)

    return logger


def setup_root_logger(level: int = logging.WARNING) -> None:
    """Setup root logger configuration on stderr."""
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(name)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stderr)
        ],
        force=True,
    )
