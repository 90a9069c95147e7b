"""Exception types raised across the package."""


class TPSAError(Exception):
    """Base class for all library errors."""


class CapExceeded(TPSAError):
    pass


class NotAnIdeal(TPSAError):
    pass


class NotCentralIdempotent(TPSAError):
    pass


class NotInjective(TPSAError):
    pass


class MalformedTable(TPSAError):
    pass


class NotAlphaInvariant(TPSAError):
    pass


class NotProper(TPSAError):
    pass


class NotFiniteSupport(TPSAError):
    pass


class HandleMismatch(TPSAError):
    pass


class CoefficientOutsideDomainIdeal(TPSAError):
    pass


class DecompositionInvalid(TPSAError):
    pass


class NoEnvelopingData(TPSAError):
    pass


class NotSimple(TPSAError):
    pass


class NotSemiprime(TPSAError):
    pass


class UnknownCheck(TPSAError):
    pass


class IncompatibleFixture(TPSAError):
    pass


class ParseError(TPSAError):
    pass


class SchemaError(TPSAError):
    pass


class BudgetExceeded(TPSAError):
    """Search budget ran out; ``report`` holds whatever was scanned."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
