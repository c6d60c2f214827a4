"""Exception hierarchy shared by every module.

The CLI maps ``ValidationError`` to exit code 2 and ``ResourceCapError`` to
exit code 3; everything else is a programming or numerical error.
"""


class CribCoopError(Exception):
    """Base class for all library errors."""


class ValidationError(CribCoopError, ValueError):
    """Input violates a documented precondition."""


class ResourceCapError(CribCoopError):
    """A desk-scale size cap would be exceeded."""


# info
class NegativeMass(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class UnknownAxis(ValidationError, KeyError):
    pass


class OverlappingAxes(ValidationError):
    pass


class SizeMismatch(ValidationError):
    pass


class TableTooLarge(ResourceCapError):
    pass


# regions
class MissingAxis(ValidationError):
    pass


class Infeasible(ValidationError):
    pass


class UnboundedRegion(ValidationError):
    pass


class SourceMismatch(ValidationError):
    pass


class NonDeterministicReconstruction(ValidationError):
    pass


class AxisMapMismatch(ValidationError):
    pass


# dist-search
class InconsistentShapes(ValidationError):
    pass


class CapExceeded(ResourceCapError):
    pass


# gaussian
class NonPositiveParameter(ValidationError):
    pass


class EmptyGrid(ValidationError):
    pass


class BadBits(ValidationError):
    pass


class SampleCountTooSmall(ValidationError):
    pass


# coding-sim
class SizeOverflow(ResourceCapError):
    pass


class IndexOutOfRange(ValidationError, IndexError):
    pass


class DecodingError(CribCoopError):
    """Typicality decoding did not return a unique candidate."""


class NoCandidate(DecodingError):
    pass


class AmbiguousCandidate(DecodingError):
    pass
