"""Exception hierarchy.

Every error raised by the library derives from :class:`LeibnizError`; the
CLI maps these to exit code 3 and prints the class name.
"""

from __future__ import annotations


class LeibnizError(Exception):
    """Base class for domain errors."""


# -- number engine -----------------------------------------------------------

class ModeMismatch(LeibnizError, TypeError):
    pass


class TermOverflow(LeibnizError):
    pass


class DivisionByZero(LeibnizError, ZeroDivisionError):
    pass


class NegativeLeadingCoefficient(LeibnizError, ValueError):
    pass


class NumericModeRequired(LeibnizError):
    """The exact result would need an irrational coefficient."""


class InsufficientPrecision(LeibnizError):
    """A decision depends on digits beyond a number's accuracy horizon."""


class ZeroHasNoLeadingExponent(LeibnizError, ValueError):
    pass


class InfinitePart(LeibnizError, ValueError):
    pass


class NumberSyntaxError(LeibnizError, ValueError):
    pass


# -- relations ---------------------------------------------------------------

class ZeroArgument(LeibnizError, ValueError):
    pass


class ZeroReference(LeibnizError, ValueError):
    pass


# -- expressions and calculus ------------------------------------------------

class ParseError(LeibnizError, ValueError):
    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"at position {position}: expected {expected}, found {found}")


class DomainError(LeibnizError, ValueError):
    pass


class NonRationalValue(LeibnizError, ValueError):
    pass


class NotInfinitesimal(LeibnizError, ValueError):
    pass


class WindowTooSmall(LeibnizError, ValueError):
    pass


class VerticalTangent(LeibnizError):
    pass


class ZeroCurvature(LeibnizError):
    pass


class NoWitnessFound(LeibnizError):
    def __init__(self, max_residual, message: str = ""):
        self.max_residual = max_residual
        super().__init__(message or f"no witness; max residual {max_residual}")


class NonInvertibleJet(LeibnizError, ZeroDivisionError):
    pass


class DegenerateFamily(LeibnizError, ValueError):
    pass


# -- transfer ----------------------------------------------------------------

class FormulaSyntaxError(LeibnizError, ValueError):
    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(f"at position {position}: {message}")


class UnboundVariable(LeibnizError, ValueError):
    pass


class NotApplicable(LeibnizError):
    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__("transfer not applicable: " + ", ".join(map(str, verdict.reasons)))


# -- output ------------------------------------------------------------------

class IoError(LeibnizError, OSError):
    pass
