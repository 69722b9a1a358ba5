"""Exception hierarchy for conespectra.

Every error raised on a documented failure path derives from
:class:`ConeSpectraError`, so callers can catch one base class at the
boundary and still discriminate on the concrete type when they need to.
"""

from __future__ import annotations

__all__ = [
    "ConeSpectraError",
    "SingularMatrix",
    "NotPositiveDefinite",
    "DimensionTooLarge",
    "DegenerateCone",
    "PointInCone",
    "KernelMeetsCone",
    "NotInvariant",
    "NonConvergence",
    "LeftCone",
    "NegativeEntry",
    "NotSelfadjoint",
    "ZeroPolynomial",
    "GcdIllConditioned",
    "NotPSD",
    "NotADivisor",
    "SingularShift",
    "NotInCone",
    "NotParallel",
    "InconsistentDimension",
    "Diverged",
    "IntervalTooSmall",
]


class ConeSpectraError(Exception):
    """Base class for all conespectra failures."""


class SingularMatrix(ConeSpectraError):
    """A linear solve hit a pivot below the singularity threshold."""


class NotPositiveDefinite(ConeSpectraError):
    """Cholesky factorization found a non-positive pivot."""


class DimensionTooLarge(ConeSpectraError):
    """Input exceeds a hard dimension guard on an O(exp) routine."""


class DegenerateCone(ConeSpectraError):
    """Cone operation needs a nondegenerate (solid) cone and got one
    whose generators do not span the space."""


class PointInCone(ConeSpectraError):
    """Separation was requested for a point that lies in the cone."""


class KernelMeetsCone(ConeSpectraError):
    """An extremal-ray style argument requires the map to be injective
    on the cone, and a nonzero cone vector was found in the kernel."""


class NotInvariant(ConeSpectraError):
    """The supplied map does not carry the cone into itself."""


class NonConvergence(ConeSpectraError):
    """Fixed-point iteration exhausted its budget before the residual
    dropped below tolerance."""

    def __init__(self, message: str, iterations: int = 0, residual: float = float("nan")):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class LeftCone(ConeSpectraError):
    """An iterate left the invariant cone (numerical invariance failure)."""


class NegativeEntry(ConeSpectraError):
    """Matrix was required to be entrywise nonnegative and is not."""


class NotSelfadjoint(ConeSpectraError):
    """Matrix was required to be symmetric and is not."""


class ZeroPolynomial(ConeSpectraError):
    """The zero polynomial was passed where a nonzero one is required."""


class GcdIllConditioned(ConeSpectraError):
    """A numerical gcd landed in the band where deciding zero
    vs. nonzero remainder is not trustworthy."""


class NotPSD(ConeSpectraError):
    """A certificate check required a positive semidefinite matrix."""


class NotADivisor(ConeSpectraError):
    """Polynomial division was exact in exact arithmetic but the
    numerical remainder is too large to accept."""


class SingularShift(ConeSpectraError):
    """The shifted map id + u is singular, so the extremal
    decomposition x = y + u(y) has no solution."""


class NotInCone(ConeSpectraError):
    """Decomposition produced a component outside the cone."""


class NotParallel(ConeSpectraError):
    """u(y) is neither negligible nor parallel to y, so y is not on
    an extremal ray of the image cone."""


class InconsistentDimension(ConeSpectraError):
    """Operands have incompatible shapes."""


class Diverged(ConeSpectraError):
    """Root polishing moved the residual up on several consecutive
    steps instead of down."""


class IntervalTooSmall(ConeSpectraError):
    """Interval subdivision reached machine resolution without
    isolating a single root."""
