"""
Error hierarchy shared by the library modules, the services and the CLI.
"""
from django.core.exceptions import ValidationError


class QAsymError(Exception):
    """Base class for every error raised by the core app"""


class UsageError(QAsymError):
    """Bad invocation: order above the configured cap, malformed arguments"""


# qspec-parser

class QSpecSyntaxError(QAsymError):
    def __init__(self, message, position=None, expected=None):
        self.position = position
        self.expected = expected
        details = message
        if position is not None:
            details = f"{message} (at position {position}"
            if expected:
                details += f", expected {expected}"
            details += ")"
        super().__init__(details)


class QSpecValidationError(ValidationError, QAsymError):
    def __str__(self):
        return '; '.join(self.messages)


# series-engine

class OverflowGuard(QAsymError):
    pass


class ExactnessViolation(QAsymError):
    pass


class ZeroCoefficient(QAsymError):
    pass


# asymptotic-core

class MixedExponentMismatch(QAsymError):
    pass


class AlternatingInput(QAsymError):
    pass


class DomainError(QAsymError):
    pass


class OrderViolation(QAsymError):
    pass


class WrongExponentSet(QAsymError):
    pass


# meinardus-engine

class UnsupportedExponent(QAsymError):
    pass


class MultiplePoles(QAsymError):
    pass


class UnsupportedPoleSet(QAsymError):
    pass


class SingularSystem(QAsymError):
    pass


# catalog

class ParamError(ValidationError, QAsymError):
    def __str__(self):
        return '; '.join(self.messages)


class UnknownFamily(QAsymError):
    pass


# cli-verify

class SignMismatch(QAsymError):
    pass


class FormatError(QAsymError):
    pass


class GapError(FormatError):
    pass


class MismatchError(QAsymError):
    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)
