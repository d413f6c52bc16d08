"""Custom exceptions for the workbench."""


class BiextError(Exception):
    """Base exception for all biext errors."""


class ConfigError(BiextError):
    """Raised when configuration is invalid or missing."""


class DimensionError(BiextError):
    """Raised on shape or genus mismatch, or a genus/h outside its range."""


class LatticeArithmeticError(BiextError):
    """Raised when an exact integer division leaves a remainder.

    The divisions guarded by this error are exact by theorem, so seeing it
    means the implementation is wrong, not the input.
    """


class DomainError(BiextError):
    """Raised when a value lies outside the domain of a numeric operation."""


class FitError(BiextError):
    """Raised when an asymptotic fit cannot be carried out."""


class InconsistentSystemError(BiextError):
    """Raised when a coefficient-matching system has no solution."""


class InputError(BiextError):
    """Raised when an input file cannot be read or parsed."""
