"""Exception hierarchy.

Two families matter to callers: ValidationError (the input violates a
documented precondition; the CLI maps these to exit code 2) and
NumericalError (the input was acceptable but a computation could not
deliver the promised accuracy; exit code 1).
"""


class PonceletKitError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(PonceletKitError, ValueError):
    """An input violates a documented precondition."""


class NumericalError(PonceletKitError, RuntimeError):
    """A computation failed to reach its promised accuracy."""


# -- conic algebra ----------------------------------------------------------

class NotAnEllipseError(ValidationError):
    """Conic does not classify as an ellipse or circle."""


class DegenerateConicError(ValidationError):
    """Conic is degenerate where a nondegenerate one is required."""


class CoincidentPointsError(ValidationError):
    """Two points expected to be distinct coincide."""


class NotOnConicError(ValidationError):
    """Point is not on the conic locus within tolerance."""


class SingularPointError(ValidationError):
    """Conic gradient vanishes at the point; no tangent line exists."""


# -- Blaschke products ------------------------------------------------------

class PoleInputError(ValidationError):
    """Evaluation requested at (or too close to) a pole."""


class NotUnimodularError(ValidationError):
    """Argument must lie on the unit circle."""


class RootQualityError(NumericalError):
    """Polished roots still exceed the residual tolerance."""


# -- boundary maps ----------------------------------------------------------

class ZeroInputError(ValidationError):
    """w = 0 rejected (its image is the point at infinity)."""


class InsideEllipseError(ValidationError):
    """Point lies inside the closed elliptic disk; no disk preimage."""


class InsideParabolaError(ValidationError):
    """Point lies inside the closed parabolic region; no disk preimage."""


class NotOnBoundaryError(ValidationError):
    """Point is not on the boundary conic within tolerance."""


class AntipodalPointsError(ValidationError):
    """Tangent lines at antipodal points are parallel; no intersection."""


class CoincidentFociError(ValidationError):
    """Foci coincide; the ellipse-only formula degenerates."""


class ComplexRootsError(NumericalError):
    """A quadratic promised real roots has a negative discriminant."""


# -- elliptic integrals -----------------------------------------------------

class ModulusOutOfRangeError(ValidationError):
    """Elliptic modulus outside the supported range."""


class NoConvergenceError(NumericalError):
    """Iteration budget exhausted before reaching tolerance."""


class BranchPointInputError(ValidationError):
    """Integration endpoint sits exactly on a branch point."""


# -- verification oracles ---------------------------------------------------

class SingularInnerError(ValidationError):
    """det of the inner conic matrix vanishes; series not expandable."""


class NoTangentError(ValidationError):
    """No real tangent line from the vertex (or containment violated)."""


class RankDeficientError(ValidationError):
    """Fitting system is rank deficient (too few or degenerate points)."""
