"""Exception hierarchy shared by every module."""


class AffusionError(Exception):
    """Base class for all package errors."""


class InvalidAlgebraError(AffusionError, ValueError):
    pass


class InvalidWeightError(AffusionError, ValueError):
    pass


class InternalConsistencyError(AffusionError, AssertionError):
    """A mathematical invariant that can never fail did fail; signals a bug."""


class UnitarityError(InternalConsistencyError):
    pass


class InconsistentChargeError(InternalConsistencyError):
    pass


class RoundingFailure(AffusionError, ArithmeticError):
    """A floating-point sum could not be rounded to an integer within tolerance."""


class NotAPermutationError(AffusionError, ValueError):
    pass


class SearchBoundExceeded(AffusionError, RuntimeError):
    pass


class VerificationError(InternalConsistencyError):
    """A hardcoded or constructed symmetry failed verification."""
