"""Exception hierarchy.

Input problems derive from :class:`InvalidSpectrum`, genuine "no" answers from
:class:`NotRealizable`, and internal self-check failures from
:class:`VerificationError`.
"""


class Sniep5Error(Exception):
    pass


class InvalidSpectrum(Sniep5Error, ValueError):
    pass


class NonFinite(InvalidSpectrum):
    pass


class NonZeroTrace(InvalidSpectrum):
    pass


class NotOrdered(InvalidSpectrum):
    pass


class DomainError(Sniep5Error, ValueError):
    pass


class NotRealizable(Sniep5Error):
    """The spectrum is valid input but no trace-zero symmetric nonnegative matrix has it."""

    def __init__(self, message: str, failed_condition: str | None = None):
        super().__init__(message)
        self.failed_condition = failed_condition or message


class NotPerronDominant(NotRealizable):
    pass


class NonPositiveLeading(NotRealizable):
    pass


class PreconditionError(Sniep5Error, ValueError):
    pass


class GluePreconditionError(PreconditionError):
    pass


class DegenerateU(PreconditionError):
    pass


class VerificationError(Sniep5Error, AssertionError):
    pass


class NoConvergence(Sniep5Error, ArithmeticError):
    pass


class NotPerronLike(Sniep5Error, ArithmeticError):
    pass


class MatrixPropertyError(Sniep5Error, ValueError):
    """A supplied matrix is not symmetric, not nonnegative, or has nonzero trace."""
