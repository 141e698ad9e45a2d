"""Shared exception types for the fuzzystab package."""

from __future__ import annotations


class DimensionMismatchError(ValueError):
    """An input vector does not match the configured space dimension."""


class ScaleError(ArithmeticError):
    """A geometrically scaled argument left the representable range.

    Carries the scheme id and the iteration index that tripped the guard.
    """

    def __init__(self, message: str, scheme: str | None = None, n: int | None = None):
        super().__init__(message)
        self.scheme = scheme
        self.n = n


class DomainError(ValueError):
    """Control-function evaluation outside its domain (0 raised to a negative power)."""


class ConfigError(ValueError):
    """Invalid experiment configuration, anchored to the offending config key."""

    def __init__(self, location: str, reason: str):
        super().__init__(f"{location}: {reason}")
        self.location = location
        self.reason = reason
