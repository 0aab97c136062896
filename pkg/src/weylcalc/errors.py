"""Exception hierarchy shared across the package."""


class WeylError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(WeylError):
    """An argument violates a documented precondition."""


class IncompatiblePlanckError(WeylError):
    """Two algebras carry different values of hbar/2pi."""


class NotSubalgebraError(WeylError):
    """Divisibility precondition between two algebras fails."""


class NotAUnitError(WeylError):
    """gcd(t, N) != 1 for a requested Galois substitution."""


class OutOfRangeError(WeylError):
    """A requested point lies outside the grid extent."""


class TooLargeError(WeylError):
    """A size guard was exceeded."""


class NotExactlySummableError(WeylError):
    """Phase ratio is not a small rational multiple of pi."""


class NotWellDefinedError(WeylError):
    """A limit sweep did not pass the Cauchy verdict."""

    def __init__(self, message, tail_diffs=None):
        super().__init__(message)
        self.tail_diffs = list(tail_diffs or [])


class InsufficientDataError(WeylError):
    """Too few points for the requested estimate."""


class NumericError(WeylError):
    """A numeric routine failed or exceeded the dense-size budget."""


class DslError(WeylError):
    """Base class for expression-language failures."""


class DslSyntaxError(DslError):
    """Tokenizer/parser rejection, with position information."""

    def __init__(self, message, pos=None, expected=None):
        loc = f" at position {pos}" if pos is not None else ""
        exp = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(message + loc + exp)
        self.pos = pos
        self.expected = set(expected or ())


class DslTypeError(DslError):
    """Well-formed syntax with inconsistent scalar/operator typing."""


class UnboundSymbolError(DslError):
    """A free symbol was not supplied in the bindings."""
