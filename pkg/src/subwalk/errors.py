"""Exception hierarchy shared by the library and the CLI.

The CLI maps these to process exit codes: DomainError -> 2,
BudgetError -> 3, SolverError -> 4.
"""


class SubwalkError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SubwalkError):
    """Parameter outside the mathematical domain of the operation."""


class BudgetError(SubwalkError):
    """Requested computation exceeds a memory/size/accuracy budget.

    Parameters
    ----------
    message : str
    suggestion : str, optional
        Human-readable hint for a smaller request that would fit.
    """

    def __init__(self, message, suggestion=None):
        super().__init__(message if suggestion is None
                         else f"{message} (suggestion: {suggestion})")
        self.suggestion = suggestion


class SolverError(SubwalkError):
    """A linear solver / optimizer / quadrature failed to converge."""
