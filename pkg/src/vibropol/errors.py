"""Exception types shared across the package."""


class VibropolError(Exception):
    """Base class for package errors."""


class ConfigError(VibropolError):
    """Malformed or inconsistent configuration input."""


class DomainError(VibropolError, ValueError):
    """Physically out-of-range argument (negative wavenumber, grazing
    angle, non-passive medium and the like)."""


class UltrastrongError(DomainError):
    """Coupling too large for the oscillator model: the lower root of the
    full coupled-mode equation would be imaginary."""


class PeakCountError(VibropolError):
    """A splitting was requested but the peak finder did not return
    exactly two peaks.  Carries the peaks that were found."""

    def __init__(self, message, peaks):
        super().__init__(message)
        self.peaks = peaks


class FitError(VibropolError):
    """Band fit failed to converge.  Carries the best parameters seen."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
