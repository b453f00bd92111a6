"""Exception hierarchy shared by all modules.

Every error raised on purpose by the library derives from SWError.  The CLI maps
the three families below onto its exit codes.
"""


class SWError(Exception):
    """Base class for library errors."""


class InputError(SWError):
    """The caller handed over data the calculators refuse to work with (exit 1)."""


class ConsistencyError(SWError):
    """An internal identity that must hold did not hold (exit 3)."""


# f2ring
class RingMismatch(SWError):
    pass


class NotMonic(SWError):
    pass


# classcalc
class CutoffTooSmall(SWError):
    pass


class UnknownPart(SWError):
    pass


# swspin
class ValidationFailed(InputError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics) or "validation failed")


class UnsupportedPrecision(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class WrongBPlus(InputError):
    pass


class HypothesisNotMet(InputError):
    pass


class DegreeViolation(ConsistencyError):
    pass


# consum
class NegativeMuResidue(ConsistencyError):
    pass


# families
class NotDivisibleByU3(InputError):
    pass


class MissingSegre(InputError):
    pass


class NoChamber(InputError):
    pass


# cli
class ParseError(SWError):
    pass
