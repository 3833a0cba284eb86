"""Exception types shared across the simulation modules."""


class SimulationError(Exception):
    """Base class for all chaosfiber errors."""


class DomainError(SimulationError, ValueError):
    """A parameter or geometric input is outside its documented range."""


class BoundarySingularityError(SimulationError):
    """Tangent/normal queried at a point where the boundary is not smooth."""


class CoverageError(DomainError):
    """A resampling grid does not cover the region it must represent."""


class ConvergenceError(SimulationError):
    """Iterative solver failed to converge; carries the final residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NumericalBlowupError(SimulationError):
    """Non-finite amplitudes detected during propagation; carries the step index."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class GeometryError(SimulationError):
    """Ray tracing could not locate the next boundary intersection."""


class ConfigError(SimulationError):
    """A run configuration file is malformed or contains bad values."""
