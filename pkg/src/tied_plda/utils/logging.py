"""Logging utilities for tied-plda.

Loggers live under the ``tied_plda`` namespace. Numerical routines attach
their figures (iteration, log-likelihood, auxiliary deltas) through
``extra={"metrics": {...}}``; the JSON formatter emits them as fields and the
text formatter appends them as ``key=value`` pairs.
"""

import json
import logging
import sys
from typing import Any, Dict, Optional

PACKAGE_LOGGER = "tied_plda"


def _render_metrics(metrics: Dict[str, Any]) -> str:
    parts = []
    for key, value in metrics.items():
        if isinstance(value, float):
            parts.append(f"{key}={value:.6g}")
        else:
            parts.append(f"{key}={value}")
    return " ".join(parts)


class JSONFormatter(logging.Formatter):
    """
    Formats log records as JSON strings, one object per line.
    """
    def format(self, record: logging.LogRecord) -> str:
        log_object = {
            "timestamp": self.formatTime(record, self.datefmt),
            "level": record.levelname,
            "name": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "funcName": record.funcName,
            "lineno": record.lineno,
        }
        metrics = getattr(record, "metrics", None)
        if metrics:
            log_object["metrics"] = metrics
        if record.exc_info:
            log_object["exc_info"] = self.formatException(record.exc_info)

        return json.dumps(log_object, default=float)


class MetricsTextFormatter(logging.Formatter):
    """Plain text formatter that appends any attached metrics."""

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        metrics = getattr(record, "metrics", None)
        if metrics:
            text = f"{text} [{_render_metrics(metrics)}]"
        return text


def setup_logging(
    log_level: str = "INFO",
    log_file: Optional[str] = None,
    log_format: str = "text"
) -> logging.Logger:
    """Configure the ``tied_plda`` logger.

    Console output goes to stderr; stdout is reserved for the line-oriented
    score, classify and training streams. Only the package logger is touched,
    so embedding applications keep their own root configuration.

    Args:
        log_level: The logging level name (default: "INFO")
        log_file: Path to an additional log file (optional)
        log_format: 'text' or 'json' (default: "text")

    Returns:
        The configured package logger.
    """
    numeric_level = getattr(logging, log_level.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Invalid log level: {log_level}")
    if log_format not in ("text", "json"):
        raise ValueError(f"Invalid log format: {log_format}")

    logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.setLevel(numeric_level)
    logger.propagate = False

    if log_format == "json":
        formatter: logging.Formatter = JSONFormatter()
    else:
        formatter = MetricsTextFormatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    return logger


def get_logger(name: str) -> logging.Logger:
    """Get a logger inside the package namespace.

    Args:
        name: Usually ``__name__``; bare names are placed under ``tied_plda``.
    """
    if name != PACKAGE_LOGGER and not name.startswith(PACKAGE_LOGGER + "."):
        name = f"{PACKAGE_LOGGER}.{name}"
    return logging.getLogger(name)
