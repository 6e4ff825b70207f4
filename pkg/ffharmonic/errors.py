"""
Exception hierarchy for the finite-field harmonic analysis core.
"""


class FiniteFieldError(Exception):
    """Base class for every error raised by ffharmonic."""
    pass


class NotPrime(FiniteFieldError, ValueError):
    """Exception raised when a field modulus is not prime."""
    pass


class EvenCharacteristic(FiniteFieldError, ValueError):
    """Exception raised for characteristic two."""
    pass


class ZeroArgument(FiniteFieldError, ValueError):
    """Exception raised when a scalar that must be invertible is zero."""
    pass


class EmptyDomain(FiniteFieldError, ValueError):
    """Exception raised when a norm is taken over an empty point set."""
    pass


class OutOfRangeValue(FiniteFieldError, ValueError):
    """Exception raised when a function leaves the interval [0, 1]."""
    pass


class NotNormalized(FiniteFieldError, ValueError):
    """Exception raised when sum F^p differs from 1."""
    pass


class BudgetExceeded(FiniteFieldError):
    """Exception raised when an enumeration would exceed a configured cap."""

    def __init__(self, cap_name: str, required: int, cap: int):
        self.cap_name = cap_name
        self.required = required
        self.cap = cap
        super().__init__(f"{cap_name} exceeded: need {required}, cap is {cap}")


class SearchFailed(FiniteFieldError):
    """Exception raised when a seeded search exhausts its retry budget."""
    pass


class NotHomogeneous(FiniteFieldError, ValueError):
    """Exception raised when a function is not constant on punctured lines."""
    pass


class EmptyVariety(FiniteFieldError, ValueError):
    """Exception raised when a variety has no points."""
    pass


class ZeroFunction(FiniteFieldError, ValueError):
    """Exception raised when a ratio is requested for the zero function."""
    pass


class InvalidK(FiniteFieldError, ValueError):
    """Exception raised for an affine dimension outside 0 <= k <= d - 2."""
    pass


class NotContained(FiniteFieldError, ValueError):
    """Exception raised when an affine subspace leaves its sphere."""
    pass


class DimensionMismatch(FiniteFieldError, ValueError):
    """Exception raised when a function and a variety live in different spaces."""
    pass


class UnsupportedExponent(FiniteFieldError, ValueError):
    """Exception raised for an exponent outside the range an operation accepts."""
    pass


class IdentityViolation(FiniteFieldError):
    """Exception raised when two evaluation paths of an exact identity disagree."""
    pass
