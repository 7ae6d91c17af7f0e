"""Utility functions for tied-plda."""

from .logging import setup_logging, get_logger

__all__ = ["setup_logging", "get_logger"]
