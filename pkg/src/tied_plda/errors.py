"""Exception hierarchy for tied-plda.

Every error raised deliberately by the package derives from
:class:`TiedPldaError` and carries the process exit code the CLI reports
for it.
"""

from typing import Any, Optional


class TiedPldaError(Exception):
    """Base class for all tied-plda errors."""

    exit_code: int = 1


class UsageError(TiedPldaError):
    """Invalid combination of options detected after argument parsing."""

    exit_code = 1


class DataFormatError(TiedPldaError, ValueError):
    """A file or input could not be parsed or violates its format."""

    exit_code = 2


class DimensionMismatchError(DataFormatError):
    """Two inputs disagree on a dimension."""

    def __init__(self, what: str, expected: Any, actual: Any, source: Optional[str] = None):
        self.what = what
        self.expected = expected
        self.actual = actual
        self.source = source
        where = f" in {source}" if source else ""
        super().__init__(f"{what} mismatch{where}: expected {expected}, got {actual}")


class ModelInvariantError(TiedPldaError, ValueError):
    """A model container was built in violation of its invariants."""

    exit_code = 2


class NumericalError(TiedPldaError, ArithmeticError):
    """A numerical failure: no finite likelihood, collapsed variance, empty data."""

    exit_code = 3
