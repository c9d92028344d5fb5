"""Exception hierarchy shared by every module of the package."""


class CbdError(ValueError):
    """Base class for all errors raised by :mod:`cbd`."""


class ValidationError(CbdError):
    """A system description violates a structural or probabilistic invariant."""


class NonUnitMass(ValidationError):
    pass


class NegativeProbability(ValidationError):
    pass


class DuplicateContent(ValidationError):
    pass


class OverconnectedContent(ValidationError):
    pass


class DuplicateContextLabel(ValidationError):
    pass


class EmptySystem(ValidationError):
    pass


class InvalidTable(ValidationError):
    pass


class EpsilonOutOfRange(ValidationError):
    pass


class UnknownContent(CbdError):
    pass


class WrongArity(CbdError):
    pass


class WrongShape(CbdError):
    pass


class NotConsistentlyConnected(CbdError):
    pass


class SystemTooLarge(CbdError):
    pass


class TooManyContents(CbdError):
    pass


class DimensionMismatch(CbdError):
    pass


class ParseError(CbdError):
    """Malformed input text: bad JSON, rationals or outcome strings."""
