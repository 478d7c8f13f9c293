"""
Exception hierarchy for WristAuth
"""

from typing import Optional


class WristAuthError(Exception):
    """Base class for all WristAuth errors"""


class DomainError(WristAuthError, ValueError):
    """An argument lies outside the domain an operation accepts"""


class TrialParseError(DomainError):
    """A trial file could not be parsed"""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        location = ""
        if source:
            location += f"{source}"
        if line is not None:
            location += f"{':' if source else 'line '}{line}"
        super().__init__(f"{location}: {message}" if location else message)


class TrialValidationError(DomainError):
    """A trial violates one of its invariants"""


class TrialTooShortError(TrialValidationError):
    """A trial or channel is shorter than the smoothing window"""


class SingularityError(DomainError):
    """A linear system has no unique solution"""


class ConvergenceError(WristAuthError):
    """An iterative solver stopped before reaching its tolerance"""

    def __init__(self, message: str, sweeps: int, violation: float, coefficients=None):
        self.sweeps = sweeps
        self.violation = violation
        self.coefficients = coefficients
        super().__init__(f"{message} (sweeps={sweeps}, kkt_violation={violation:.3e})")


class ManifestError(WristAuthError):
    """A dataset manifest does not follow the manifest schema"""


class ProfileFormatError(WristAuthError):
    """A stored profile or classifier document cannot be read"""
