"""Exception types raised across the package.

Every error is a subclass of :class:`FramecertError`, so callers that only
want a broad "this input was rejected" category can catch the base class.
"""

__all__ = [
    "FramecertError",
    "NotAFrame",
    "SingularTransform",
    "ZeroScalar",
    "AsymmetricInput",
    "ZeroXi",
    "NotRealFrame",
    "TooLarge",
    "NotRetrievableInput",
    "ShapeMismatch",
    "BadDimension",
    "DeniedAngle",
    "BadCardinality",
    "DegenerateAfterRetries",
    "CardinalityTooSmall",
    "SelectionFailed",
    "FrameFormatError",
]


class FramecertError(Exception):
    """Base class for all package-specific errors."""


class NotAFrame(FramecertError):
    """The vector family does not span the ambient space."""


class SingularTransform(FramecertError):
    """An invertible transform was required but the matrix is singular or
    too ill conditioned to trust."""


class ZeroScalar(FramecertError):
    """A nonzero scalar multiplier was required but a zero was supplied."""


class AsymmetricInput(FramecertError):
    """A symmetric matrix was required but the input is not symmetric."""


class ZeroXi(FramecertError):
    """A nonzero direction vector was required."""


class NotRealFrame(FramecertError):
    """A real frame was required but some entry has a nonzero imaginary
    part."""


class TooLarge(FramecertError):
    """The input exceeds the size cap of an exhaustive check."""


class NotRetrievableInput(FramecertError):
    """An operation that only makes sense for a phase retrievable frame was
    given a frame without a positive injectivity margin."""


class ShapeMismatch(FramecertError):
    """Two frames were required to share the same dimensions."""


class BadDimension(FramecertError):
    """The requested ambient dimension is outside the valid range."""


class DeniedAngle(FramecertError):
    """The requested construction angle lies on the excluded rational
    multiples of pi."""


class BadCardinality(FramecertError):
    """The requested number of vectors is incompatible with the requested
    dimension."""


class DegenerateAfterRetries(FramecertError):
    """Random generation kept producing rank-deficient families and gave
    up."""


class CardinalityTooSmall(FramecertError):
    """A construction needs more vectors than were supplied."""


class SelectionFailed(FramecertError):
    """No index selection satisfying the construction's requirements could
    be found."""


class FrameFormatError(FramecertError):
    """A frame document violates the wire format; the message names the
    offending field."""
