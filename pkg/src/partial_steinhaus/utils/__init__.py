"""Utility modules for partial_steinhaus."""

from .logger import get_logger, setup_root_logger

__all__ = ["get_logger", "setup_root_logger"]
