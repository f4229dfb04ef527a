"""Shared exception types for the dynla package."""


class DynlaError(Exception):
    """Base class for all library errors."""


class NotPrime(DynlaError):
    """The requested modulus is not a prime number."""


class ZeroInverse(DynlaError):
    """Attempted to invert zero in a field."""


class NotSquare(DynlaError):
    """An operation requiring a square matrix got a rectangular one."""


class DimensionMismatch(DynlaError):
    """Operand shapes are incompatible."""


class IndexOutOfRange(DynlaError):
    """A (1-based) row/column/vertex index is outside the valid range."""


class KTooSmall(DynlaError):
    """The rank bound k is below the minimum supported by the sketch layer."""


class AlreadyActive(DynlaError):
    """Activation requested on a structure that is already active."""


class AlreadyInactive(DynlaError):
    """Deactivation requested on a structure that is already inactive."""


class SingularInit(DynlaError):
    """Tried to build an inverse-based structure from a singular matrix."""


class WouldBeSingular(DynlaError):
    """The requested entry update would make the maintained matrix singular.

    The update is rejected and not applied.
    """


class EmptyLog(DynlaError):
    """revert() called with no applied updates left to undo."""


class ProbabilisticFailure(DynlaError):
    """A randomized structure detected an inconsistency that resampling
    did not repair."""


class SelfLoop(DynlaError):
    """General-graph edge update with identical endpoints."""


class NegativeWeight(DynlaError):
    """Weighted edge update with a negative weight."""


class WeightTooLarge(DynlaError):
    """Weighted edge update exceeding the instance's declared maximum."""


class DuplicateInsert(DynlaError):
    """Edge insertion into a graph that already contains the edge."""


class MissingDelete(DynlaError):
    """Edge deletion of an edge that is not present."""


class NotBipartite(DynlaError):
    """Edge update violating the declared left/right vertex split."""


class ModeMismatch(DynlaError):
    """The CLI mode is incompatible with the stream header kind."""


class StreamSyntaxError(DynlaError):
    """An update stream file violates the stream grammar."""


class VerificationFailure(DynlaError):
    """A maintained answer disagrees with the independent oracle."""
