"""Exception hierarchy shared by every module."""


class NlgError(Exception):
    """Base class for all errors raised by nlgames."""


class DimensionMismatch(NlgError, ValueError):
    pass


class EmptySet(NlgError, ValueError):
    pass


class NotAProjection(NlgError, ValueError):
    pass


class InvalidPvm(NotAProjection):
    pass


class InvalidState(NlgError, ValueError):
    pass


class InvalidCorrelation(NlgError, ValueError):
    pass


class InvalidStrategy(NlgError, ValueError):
    pass


class NotCommuting(InvalidStrategy):
    """Cross-commutation failed; carries the worst offending indices and defect."""

    def __init__(self, message, witness=None, defect=None):
        super().__init__(message)
        self.witness = witness
        self.defect = defect


class RangeError(NlgError, ValueError):
    pass


class NotImitation(NlgError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class NotPerfect(NlgError):
    def __init__(self, message, eps=None):
        super().__init__(message)
        self.eps = eps


class WordTooLong(NlgError, ValueError):
    pass


class EmptyFamily(NlgError, ValueError):
    pass


class RealizationMismatch(NlgError):
    pass


class NumericalInstability(NlgError, ArithmeticError):
    pass


class SearchSpaceTooLarge(NlgError):
    pass


class InputError(NlgError):
    """Malformed user input (CLI exit code 2)."""
