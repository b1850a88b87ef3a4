"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MpqueaError(Exception):
    """Base class for every library error."""


class InputError(MpqueaError):
    """Malformed or inconsistent input data."""


class NotGCM(InputError):
    pass


class NotSymmetrizable(InputError):
    pass


class Decomposable(InputError):
    pass


class NotFiniteType(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class ExponentDenominatorExceedsRoot(InputError):
    pass


class DivisionByZero(MpqueaError, ZeroDivisionError):
    pass


class BinomialRange(InputError):
    pass


class RankDeficient(InputError):
    pass


class NotAntisymmetric(InputError):
    pass


class NotInImageDomain(InputError):
    pass


class NotCartanType(InputError):
    pass


class NotEquivalent(InputError):
    pass


class NotApproxEquivalent(InputError):
    pass


class RankTooLarge(InputError):
    pass


class LatticeMissing(InputError):
    pass


class LatticeTooSmall(InputError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class PsiNotStable(InputError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ExponentNotInLattice(InputError):
    pass


class SpecMismatch(MpqueaError):
    pass


class DegreeMismatch(MpqueaError):
    pass


class FlavorMismatch(MpqueaError):
    pass


class NonTerminating(MpqueaError):
    pass


class NonConfluent(MpqueaError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownGenerator(ParseError):
    pass


class SchemaError(InputError):
    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class InconsistentData(InputError):
    pass
