"""Exception types shared across the package.

Everything raised on purpose derives from :class:`MrdpError`, so callers can
catch one base class.  Most errors are also ``ValueError`` subclasses because
they flag bad input values.
"""

from __future__ import annotations


class MrdpError(Exception):
    """Base class for all errors raised by this package."""


class ChainError(MrdpError, ValueError):
    """Invalid chain definition (duplicate labels, fewer than two elements)."""


class SizeError(MrdpError, ValueError):
    """Sequence lengths disagree with what an operation requires."""


class MonotonicityError(MrdpError, ValueError):
    """A value sequence violates its required ordering.

    ``index`` is the 0-based position of the first offending entry;
    ``argument`` optionally names which input the sequence came from.
    """

    def __init__(self, message: str, *, index: int | None = None,
                 argument: str | None = None):
        super().__init__(message)
        self.index = index
        self.argument = argument


class DomainError(MrdpError, ValueError):
    """A numeric argument lies outside the domain of the operation."""


class NormalizationError(DomainError):
    """A probability vector does not sum to 1 within tolerance."""


class BoundaryError(DomainError):
    """A derivative was requested at a point where it diverges."""


class InfeasiblePointError(MrdpError, ValueError):
    """An evaluation point makes some template increment negative."""


class InfeasibleProblemError(MrdpError, ValueError):
    """The feasible region of a problem is empty (some lower bound exceeds
    its upper bound)."""


class ConcavityError(MrdpError, RuntimeError):
    """The solver observed a second difference inconsistent with a concave
    objective.  Signals a modeling bug, not a numeric failure."""


class FileFormatError(MrdpError, ValueError):
    """A textual input file could not be parsed.

    ``line`` is the 1-based line number the error was detected on, when
    known.
    """

    def __init__(self, message: str, *, line: int | None = None):
        super().__init__(message)
        self.line = line
