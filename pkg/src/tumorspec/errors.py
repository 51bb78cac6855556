"""Exception hierarchy shared across the package.

CLI exit codes: ValidationError -> 2, SolverError -> 3; an evolution run that
leaves the admissible shape neighbourhood is not an exception (the trajectory
carries a status) but maps to exit code 4 in the CLI.
"""


class TumorSpecError(Exception):
    """Base class for package errors."""


class ValidationError(TumorSpecError):
    """Invalid model, parameters, or input shape."""


class DomainValidityError(ValidationError):
    """A shape violates the sup-norm < 1/4 admissibility bound."""


class SolverError(TumorSpecError):
    """A numerical solve failed (bracketing, Newton, or linear solve)."""


class BracketError(SolverError):
    """Root bracketing failed; carries diagnostic samples."""

    def __init__(self, message, samples=None):
        super().__init__(message)
        self.samples = samples
