class HawkesCoxError(Exception):
    """Base class for package errors."""


class DataError(HawkesCoxError, ValueError):
    """Malformed or inconsistent input data."""


class NumericalError(HawkesCoxError, FloatingPointError):
    """Overflow, non-finite values or a numerically unusable state."""
