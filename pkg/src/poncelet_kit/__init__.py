"""Blaschke products on conic-bounded domains: interior and exterior
curves of chord families, centroid loci, and numerical cross-checks."""

__version__ = "0.1.0"

from .errors import (
    NumericalError,
    PonceletKitError,
    ValidationError,
)

__all__ = ["PonceletKitError", "ValidationError", "NumericalError", "__version__"]
