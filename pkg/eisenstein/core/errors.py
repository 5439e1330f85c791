"""
Exceptions of the library. Everything raised on purpose derives from ``EisensteinError`` so the runner can tell the
expected failures from the bugs.

Two families matter for the exit status of the CLI. ``PreconditionError`` means "this input is outside the domain of the
operation" and is reported per item. ``TheoremViolation`` means a computed value contradicts a proved statement: this is
never a property of the input but of the code (or the machine), so any of them turns the run into a failure.
"""


class EisensteinError(Exception):
    """Root of the package errors"""


class PreconditionError(EisensteinError, ValueError):
    """Input does not satisfy the requirements of the operation"""


class BadPrime(PreconditionError):
    """Level is prime but too small (N < 5) or not an integer at all"""


class CompositeModulus(PreconditionError):
    pass


class NotEisensteinPrime(PreconditionError):
    """p does not divide the numerator of (N - 1)/12"""


class RangeError(PreconditionError):
    """Requested exponent r is outside 1..t (or the lifted range of the operation)"""


class UnsupportedPrime(PreconditionError):
    pass


class UnsupportedDegree(PreconditionError):
    pass


class BadIndex(PreconditionError):
    """Hecke index shares a factor with the level"""


class BothZero(PreconditionError):
    """[0:0] is not a point of the projective line"""


class NotSupersingular(PreconditionError):
    pass


class PairingUndefined(EisensteinError):
    """The pairing is only defined on the annihilator of e0 and the argument is not there"""


class GeneratorInstability(EisensteinError):
    """Filtration kept changing while the generator set grew up to the configured bound"""


class BudgetExceeded(EisensteinError):
    """Per-item time budget is over"""


class TheoremViolation(EisensteinError):
    """Computed value contradicts a proved statement"""


class InternalInvariantViolation(TheoremViolation):
    pass


class NotWellDefined(TheoremViolation):
    """Operator does not respect the Manin relations"""


class VerificationFailed(TheoremViolation):
    pass


class RankMismatch(TheoremViolation):
    """Relation module has unexpected rank or torsion"""
