"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
1 for input/validation problems, 2 for numerical failures.
"""


class GapeigError(Exception):
    exit_code = 2
    kind = "GapeigError"

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls.kind = cls.__name__


class InputError(GapeigError, ValueError):
    """Malformed or inconsistent user input."""

    exit_code = 1


class ExpressionSyntaxError(InputError):
    """Raised by the expression parser; ``position`` is a 0-based column."""

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class ProblemError(InputError):
    """A problem definition violates an invariant."""


class SchemeMismatch(InputError):
    """The requested truncation scheme does not apply to the problem."""


class UnknownCatalogEntry(InputError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown catalog entry"


class DomainError(GapeigError, ArithmeticError):
    """A coefficient expression cannot be evaluated at a point."""

    def __init__(self, message, subexpression=None, x=None):
        self.subexpression = subexpression
        self.x = x
        super().__init__(message)


class StepSizeUnderflow(GapeigError, RuntimeError):
    """Adaptive integration stalled; usually a coefficient singularity."""

    def __init__(self, message, x=None):
        self.x = x
        super().__init__(message)


class NonDecaying(GapeigError, RuntimeError):
    """No recessive solution could be isolated (spectral parameter not in a gap)."""


class NotAnEigenvalue(GapeigError, RuntimeError):
    """Shooting branches do not match at the requested spectral parameter."""


class BudgetExceeded(GapeigError, RuntimeError):
    pass


class TailBoundError(GapeigError, RuntimeError):
    """A Weyl tail does not decay fast enough to bound the truncated integral."""
