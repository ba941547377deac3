"""Exception types raised by wpolar.

Each error may carry the name of the offending argument so that callers
(the CLI in particular) can report which precondition was violated.
"""


class WPolarError(Exception):
    """Base class for all wpolar errors."""

    def __init__(self, arg=None, detail=""):
        self.arg = arg
        self.detail = detail
        super().__init__(arg, detail)

    def __str__(self):
        head = type(self).__name__
        if self.arg is not None:
            head = f"{head}({self.arg})"
        return f"{head}: {self.detail}" if self.detail else head


class PreconditionError(WPolarError, ValueError):
    """A numerical precondition on an input matrix does not hold."""


class NotHermitian(PreconditionError):
    pass


class NotPositiveDefinite(PreconditionError):
    pass


class Singular(PreconditionError):
    pass


class NotUnitary(PreconditionError):
    pass


class NotReflection(PreconditionError):
    pass


class RankDeficient(PreconditionError):
    pass


class DomainError(PreconditionError):
    """A matrix function was applied outside the domain of its scalar function."""


class DimensionMismatch(WPolarError, ValueError):
    pass


class BadParams(WPolarError, ValueError):
    pass


class NumericalFailure(WPolarError, ArithmeticError):
    pass


class IllConditionedEigenbasis(NumericalFailure):
    """Diagonalizability cannot be decided at the requested tolerance."""


class EnumerationOverflow(WPolarError, OverflowError):
    pass


class MultiplicityWarning(UserWarning):
    """Repeated eigenvalues: the solution set is a continuum, only representatives are listed."""


class MalformedInput(WPolarError, ValueError):
    """An input file could not be parsed as a matrix."""
