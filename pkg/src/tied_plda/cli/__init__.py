"""Command-line interface for tied-plda."""

from .main import cli, main, run

__all__ = ["cli", "main", "run"]
