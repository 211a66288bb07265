"""Exception hierarchy shared by every module."""


class QslError(Exception):
    """Base class for all library errors."""


class ModelError(QslError, ValueError):
    """A Hamiltonian model was built from invalid parameters."""


class ShapeError(QslError, ValueError):
    """Array dimensions do not match or do not factor as required."""


class NumericsError(QslError, ArithmeticError):
    """A numerical routine produced an unusable result."""


class ResolutionError(QslError, ValueError):
    """The time grid is too coarse for the requested evolution."""


class OrthogonalityError(QslError, ValueError):
    """Two states are (numerically) orthogonal where an overlap phase is needed."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class DegenerateError(QslError, ArithmeticError):
    """Zero energy fluctuation with distinct endpoints."""


class SandwichViolation(QslError, AssertionError):
    """T_RQSL >= T >= T_QSL was breached beyond numerical slack."""


class DomainError(QslError, ValueError):
    """An argument lies outside the supported domain."""


class ConfigError(QslError, ValueError):
    """A run configuration could not be parsed or validated."""
