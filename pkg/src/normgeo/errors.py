"""Exception types shared across the package."""


class NormGeoError(Exception):
    """Base class for all package errors."""


class NormSpecError(NormGeoError):
    """A norm description is malformed or fails validation."""


class GramValidationError(NormSpecError):
    """A gram matrix is not symmetric positive definite.

    pivot_index/pivot are set when elimination hit a nonpositive pivot,
    and are None for symmetry/shape failures.
    """

    def __init__(self, message, pivot_index=None, pivot=None):
        super().__init__(message)
        self.pivot_index = pivot_index
        self.pivot = pivot


class DimensionMismatchError(NormGeoError):
    """Vector length does not match the norm's dimension."""


class ZeroVectorError(NormGeoError):
    """A direction-dependent quantity was asked for at the zero vector."""


class DerivativeConvergenceError(NormGeoError):
    """One-sided difference quotients failed to stabilize above the step floor."""
