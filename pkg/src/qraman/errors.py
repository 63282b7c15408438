"""Exception types shared across the package."""


class QRamanError(Exception):
    """Base class for all package errors."""


class InvalidModelError(QRamanError):
    """Molecular model violates a structural constraint."""


class InvalidInputError(QRamanError):
    """Numerical input out of its valid range."""


class UnsupportedKindError(QRamanError):
    """Photon-source kind does not support the requested evaluator."""


class TimelineRangeError(QRamanError):
    """Requested time lies outside the propagated density-matrix window."""


class ConvergenceError(QRamanError):
    """Quadrature failed its step-halving check.

    Carries the last two estimates so the caller can inspect the drift.
    """

    def __init__(self, message, coarse=None, fine=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


class ConfigError(QRamanError):
    """Configuration file is malformed or out of range."""
