"""Error taxonomy shared across the solver.

Numerical failures abort the run rather than silently patching the state;
clamped densities or temperatures would mask scheme defects.
"""


class KineticError(Exception):
    """Base class for solver failures (CLI maps these to exit code 3)."""


class InvalidStateError(KineticError):
    """A distribution contains NaN or Inf entries."""


class DegenerateMomentsError(KineticError):
    """Non-positive density or temperature at some cell."""

    def __init__(self, message, cell_index=None):
        super().__init__(message)
        self.cell_index = cell_index


class EquilibriumCorrectionError(KineticError):
    """Moment-matching Newton solve did not converge."""

    def __init__(self, message, residual=None, cell_index=None):
        super().__init__(message)
        self.residual = residual
        self.cell_index = cell_index


class DomainError(KineticError, ValueError):
    """Argument outside its mathematical domain (x outside grid, rho <= 0, ...)."""


class PreconditionError(KineticError, ValueError):
    """An operation precondition is violated (e.g. CFL > 1)."""


class UsageError(Exception):
    """Bad CLI flags or config file (exit code 2)."""
