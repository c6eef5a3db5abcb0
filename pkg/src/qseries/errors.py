"""Exception hierarchy shared by every module of the package."""


class QSeriesError(Exception):
    """Base class for all q-series evaluation errors."""


class PoleError(QSeriesError):
    """A denominator factor vanished (or came within the near-pole guard)."""


class DomainError(QSeriesError):
    """Arguments fall outside the domain where the object is defined."""


class ConvergenceError(QSeriesError):
    """The requested series is evaluated outside its region of convergence."""


class TruncationError(QSeriesError):
    """A summation or product hit its hard term cap before converging."""


class QuadratureError(QSeriesError):
    """Quadrature at order N and 2N disagree by more than the tolerance."""


class PatternMismatch(QSeriesError):
    """A series does not have the structure a transformation rule expects."""


class UnknownIdentity(QSeriesError, KeyError):
    """No registry entry exists under the requested id."""

    def __str__(self) -> str:
        return Exception.__str__(self)


class ParseError(QSeriesError):
    """Malformed expression text.

    ``offset`` is the 0-based character index; ``line`` and ``column`` are
    1-based.  ``expected`` lists the tokens that would have been accepted.
    """

    def __init__(self, message: str, text: str = "", offset: int = 0, expected=()):
        self.text = text
        self.offset = offset
        prefix = text[:offset]
        self.line = prefix.count("\n") + 1
        self.column = offset - (prefix.rfind("\n") + 1) + 1
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at line {self.line}, column {self.column}"
        if self.expected:
            detail += " (expected one of: " + ", ".join(self.expected) + ")"
        super().__init__(detail)


class ConfigError(QSeriesError, ValueError):
    """Invalid run configuration (sample count, tolerance, mode, catalog)."""
