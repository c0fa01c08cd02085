"""Exception hierarchy.

Every error maps to one CLI exit code: input problems exit 2, precision
exhaustion exits 3, and internal inconsistencies (a certification bug or a
violated theorem-level invariant) exit 4.
"""


class PowfracError(Exception):
    exit_code = 1


class InputError(PowfracError):
    exit_code = 2


class ParseError(InputError):
    pass


class BadInput(InputError):
    pass


class NotSquarefree(InputError):
    pass


class NoRootAboveOne(InputError):
    pass


class AmbiguousRoot(InputError):
    pass


class NotSalem(InputError):
    pass


class BaseMismatch(InputError):
    pass


class NotAlgebraicInteger(InputError):
    pass


class PrecisionExhausted(PowfracError):
    exit_code = 3


class InternalInconsistency(PowfracError):
    exit_code = 4


class InconsistentSample(InternalInconsistency):
    """Integer side and fractional side of s_n disagree."""


class PeriodicityViolation(InternalInconsistency):
    """A recurrence with gcd(A_0, L) = 1 showed a nonzero preperiod."""


class ToleranceViolation(InternalInconsistency):
    pass


class NoCollision(PowfracError):
    """No repeated window Z_m = Z_r inside the scanned horizon."""

    def __init__(self, message, needed_horizon=None):
        super().__init__(message)
        self.needed_horizon = needed_horizon


class NoIrrationalPairs(PowfracError):
    pass


class EtaAssignmentError(PowfracError):
    """A sample lies farther than epsilon from every cluster center."""
