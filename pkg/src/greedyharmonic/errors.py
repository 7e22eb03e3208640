"""Exception taxonomy shared across the package.

Errors distinguish user mistakes (domain/resource) from computational
exhaustion (precision/budget); the CLI maps the latter to exit code 3.
"""


class DomainError(ValueError):
    """An argument is outside the mathematical domain (e.g. x <= 0)."""


class ResourceLimitError(ValueError):
    """A size parameter exceeds the guard rail (e.g. block order k > 30)."""


class PrecisionError(RuntimeError):
    """The working precision ceiling was reached before a comparison or
    target radius could be decided.  For user-supplied oracles this can
    mean the target secretly equals some partial sum."""


class BudgetError(RuntimeError):
    """A step/search budget was exhausted before the sought event occurred."""


class InconsistencyError(RuntimeError):
    """An internal cross-check failed (e.g. an imaginary part that must
    vanish has an enclosure excluding zero)."""
