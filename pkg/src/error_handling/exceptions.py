"""
Exception hierarchy for gaussqkd.

Every error raised by the library derives from GaussQKDError. The class
attribute ``exit_code`` is what the CLI returns when the error escapes a
command.
"""
from enum import Enum


class ErrorSeverity(Enum):
    """Severity levels for errors in the system."""
    INFO = 0
    WARNING = 1
    ERROR = 2
    CRITICAL = 3


class GaussQKDError(Exception):
    """Base exception class for all gaussqkd errors."""
    exit_code: int = 1

    def __init__(self, message: str, severity: ErrorSeverity = ErrorSeverity.ERROR):
        self.message = message
        self.severity = severity
        super().__init__(message)


class MalformedMatrix(GaussQKDError):
    """Matrix is not square, not even-dimensional, or not symmetric."""
    exit_code = 2


class DimensionError(GaussQKDError):
    """Mode counts or vector lengths do not match."""
    pass


class UnsupportedTransform(GaussQKDError):
    """Unknown symplectic generator kind."""
    pass


class SingularCovariance(GaussQKDError):
    """Covariance matrix is singular or too badly conditioned to invert."""
    pass


class NumericalInstability(GaussQKDError):
    """A radicand or eigenvalue fell negative beyond tolerance."""
    pass


class PurityError(GaussQKDError):
    """Operation requires a pure global state."""
    pass


class UnphysicalInput(GaussQKDError):
    """State parameters violate the uncertainty principle."""
    exit_code = 2


class SeparableState(GaussQKDError):
    """Operation requires an NPPT (entangled) state."""
    exit_code = 3


class SingularDenominator(GaussQKDError):
    """A closed-form denominator vanished."""
    pass


class NotCoherentSecure(GaussQKDError):
    """State cannot be secured against finite coherent attacks."""
    exit_code = 3


class InternalInconsistency(GaussQKDError):
    """Two evaluation paths of the same quantity disagree."""

    def __init__(self, message: str):
        super().__init__(message, ErrorSeverity.CRITICAL)


class EmptySweep(GaussQKDError):
    """No admissible state in a sweep grid."""
    exit_code = 4


class NoAdvantage(GaussQKDError):
    """Advantage distillation needs an error rate below one half."""
    pass


class KeyLengthError(GaussQKDError):
    """Message and key lengths differ."""
    pass


class InvalidExponent(GaussQKDError):
    """RSA public exponent is not coprime with phi, or primes are invalid."""
    pass


class MessageTooLarge(GaussQKDError):
    """RSA message is not smaller than the modulus."""
    pass


class ConfigurationError(GaussQKDError):
    """Error in run configuration."""
    pass
