"""Exception hierarchy.

Two families matter to callers: ``InputError`` (malformed requests; the CLI
exits with code 2) and ``HypothesisFailed`` (a mathematical precondition does
not hold; the CLI exits with code 1).  Negative findings such as "not an
epimorphism" are results, not exceptions.
"""


class GradedHomError(Exception):
    pass


class InputError(GradedHomError, ValueError):
    pass


class HypothesisFailed(GradedHomError):
    pass


# -- rings -------------------------------------------------------------------

class UnknownGenerator(InputError):
    pass


class NegativeExponentOfNonInverted(InputError):
    pass


class AlreadyInverted(InputError):
    pass


class ProductRingUnsupported(InputError):
    pass


class NonMonomial(InputError):
    pass


class TrivialParity(InputError):
    pass


class IllFormedAlgebraMap(InputError):
    pass


class RingMismatch(InputError):
    pass


class GradingMismatch(InputError):
    pass


class InfiniteSlices(HypothesisFailed):
    """Weight slices of the ring are not finitely generated."""


# -- modules -----------------------------------------------------------------

class NonHomogeneousPresentation(InputError):
    pass


class NotLocal(HypothesisFailed):
    pass


class NotLocallyFreeAtP(HypothesisFailed):
    pass


class NotConnected(HypothesisFailed):
    pass


class NotProjectiveSomewhere(HypothesisFailed):
    def __init__(self, message, prime=None, witness=None):
        super().__init__(message)
        self.prime = prime
        self.witness = witness


class UnsupportedCoefficients(HypothesisFailed):
    pass


# -- super linear algebra ----------------------------------------------------

class LengthMismatch(InputError):
    pass


class BoundExceeded(InputError):
    pass


class MalformedWord(InputError):
    pass


class TwoNotInvertible(HypothesisFailed):
    pass


# -- complexes ---------------------------------------------------------------

class DSquaredNonzero(GradedHomError):
    def __init__(self, degree):
        super().__init__(f"d_{degree - 1} o d_{degree} != 0")
        self.degree = degree


class TruncationTooSmall(InputError):
    pass


class ExactnessAuditFailed(HypothesisFailed):
    pass


# -- site --------------------------------------------------------------------

class NotAnEpi(HypothesisFailed):
    pass


# -- cli ---------------------------------------------------------------------

class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class UnknownCommand(InputError):
    pass


class CorpusMissing(InputError):
    pass
