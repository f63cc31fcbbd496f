"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class QminError(Exception):
    """Base class for all library errors."""

    code = "error"


class InvalidInput(QminError, ValueError):
    code = "invalid_input"


class NotCoprime(InvalidInput):
    code = "not_coprime"


class InvalidInterval(InvalidInput):
    code = "invalid_interval"


class DeltaMismatch(InvalidInput):
    code = "delta_mismatch"


class ResourceLimit(QminError):
    code = "resource_limit"


class QuadratureFailure(QminError, ArithmeticError):
    code = "quadrature_failure"


class SupportViolation(QminError, AssertionError):
    """A sampled denominator fell outside the theoretical support; always a bug."""

    code = "support_violation"
