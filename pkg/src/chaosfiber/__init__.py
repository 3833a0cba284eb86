"""Transverse-mode entanglement in optical fibers with chaotic billiard cores.

The pipeline: a limaçon-family cross-section rasterized to a hard-wall
potential (geometry), coherent/squeezed input packets (states), split-step
Fourier propagation along the fiber axis (propagator), Dirichlet eigenmodes
of the core (eigenmodes), radial-angular entanglement entropy
(entanglement), and the classical ray limit (classical).
"""

from .entanglement import (
    EntanglementProbe,
    PolarField,
    PolarGrid,
    ReducedDensity,
    SchmidtSpectrum,
    entropy_via_svd,
    field_entropy,
    reduce_over_theta,
    schmidt_spectrum,
    to_polar,
)
from .errors import (
    BoundarySingularityError,
    ConfigError,
    ConvergenceError,
    CoverageError,
    DomainError,
    GeometryError,
    NumericalBlowupError,
    SimulationError,
)
from .geometry import (
    BilliardShape,
    GridSpec,
    PotentialField,
    boundary_point,
    boundary_quartic_residual,
    boundary_speed,
    boundary_tangent_normal,
    contains,
    rasterize_potential,
    shape_from_lambda,
)
from .states import (
    ScalarField2D,
    SqueezedParams,
    momentum_expectation,
    position_expectation,
    product_state_2d,
    squeezed_coherent_1d,
)

__version__ = "0.1.0"

__all__ = [
    "BilliardShape",
    "BoundarySingularityError",
    "ConfigError",
    "ConvergenceError",
    "CoverageError",
    "DomainError",
    "EntanglementProbe",
    "GeometryError",
    "GridSpec",
    "NumericalBlowupError",
    "PolarField",
    "PolarGrid",
    "PotentialField",
    "ReducedDensity",
    "ScalarField2D",
    "SchmidtSpectrum",
    "SimulationError",
    "SqueezedParams",
    "boundary_point",
    "boundary_quartic_residual",
    "boundary_speed",
    "boundary_tangent_normal",
    "contains",
    "entropy_via_svd",
    "field_entropy",
    "momentum_expectation",
    "position_expectation",
    "product_state_2d",
    "rasterize_potential",
    "reduce_over_theta",
    "schmidt_spectrum",
    "shape_from_lambda",
    "squeezed_coherent_1d",
    "to_polar",
]
