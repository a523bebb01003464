"""Exception types shared across the package."""

from __future__ import annotations


class AffineSmileError(Exception):
    """Base class for all package-specific errors."""


class InvalidModelError(AffineSmileError):
    """Model parameters violate the admissibility conditions.

    Carries the full validation report in ``report``.
    """

    def __init__(self, report):
        self.report = report
        lines = "; ".join(f"{code}: {msg}" for code, msg in report.violations)
        super().__init__(f"invalid model parameters ({lines})")


class NumericalError(AffineSmileError):
    """A numerical routine failed to converge or produced an inconsistent result."""


class ConfigError(AffineSmileError):
    """Scenario configuration failed validation.

    ``field_errors`` is a list of (field path, message) pairs.
    """

    def __init__(self, field_errors):
        self.field_errors = list(field_errors)
        lines = "\n".join(f"  {path}: {msg}" for path, msg in self.field_errors)
        super().__init__(f"invalid configuration:\n{lines}")
