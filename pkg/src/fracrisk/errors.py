"""Exception types raised across the package."""


class FracRiskError(Exception):
    """Base class for every error this package raises on purpose."""


class DomainError(FracRiskError, ValueError):
    """An argument lies outside the domain of the operation."""


class IngestionError(FracRiskError, ValueError):
    """Price data could not be parsed or failed validation."""


class NumericalRankError(FracRiskError, ArithmeticError):
    """A linear system is rank deficient and cannot be solved directly."""


class ConvergenceError(FracRiskError, RuntimeError):
    """An iterative solver stopped before meeting its tolerance."""


class DivergenceError(FracRiskError, RuntimeError):
    """Training produced a non-finite loss."""
