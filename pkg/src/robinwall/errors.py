"""Exception types shared across the package."""


class RobinWallError(Exception):
    """Base class for all package errors."""


class DomainError(RobinWallError, ValueError):
    """An argument lies outside the mathematical or contractual domain."""


class PoleError(RobinWallError, ArithmeticError):
    """Evaluation was requested at (or too close to) a pole."""


class ConvergenceDomainError(DomainError):
    """A series argument is outside the region where the series converges
    fast enough to be trusted."""


class SolverError(RobinWallError, RuntimeError):
    """A root solve failed; the message carries the final bracket/residual."""


class BudgetError(SolverError):
    """A truncated sum did not converge within the level budget."""
