"""Limaçon (Robnik-family) billiard geometry and hard-wall potential grids.

The boundary family is the conformal image w = A e^{i theta} + B e^{2i theta}
of the unit circle, controlled by a single deformation parameter lam in
[0, 0.5].  The reparametrisation p = atan(lam*sqrt(2)), A = cos(p),
B = sin(p)/sqrt(2) keeps the enclosed area equal to pi for every lam.
lam = 0 is the unit circle; lam -> 0.5 approaches the cusped cardioid.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundarySingularityError, DomainError

SQRT2 = np.sqrt(2.0)

# Largest admissible reparametrisation angle, atan(1/sqrt(2)); reached at lam = 0.5.
P_SING = np.arctan(1.0 / SQRT2)


@dataclass(frozen=True)
class BilliardShape:
    """Deformation parameter and derived boundary coefficients (A, B, p)."""

    lam: float
    p: float
    A: float
    B: float

    @property
    def max_radius(self):
        """Largest distance from the origin to the boundary (at theta = 0)."""
        return self.A + self.B


def shape_from_lambda(lam: float) -> BilliardShape:
    """Build the billiard shape for deformation parameter lam in [0, 0.5].

    Raises DomainError for lam outside [0, 0.5].  At lam = 0.5 the boundary
    has a cusp at theta = pi; the shape is accepted but tangent/normal
    queries at the cusp raise BoundarySingularityError.
    """
    lam = float(lam)
    if not (0.0 <= lam <= 0.5) or not np.isfinite(lam):
        raise DomainError(f"deformation parameter must be in [0, 0.5], got {lam}")
    p = np.arctan(lam * SQRT2)
    a = np.cos(p)
    b = np.sin(p) / SQRT2
    return BilliardShape(lam=lam, p=p, A=a, B=b)


def boundary_point(shape: BilliardShape, theta):
    """Boundary point (u, v) at parameter theta.

    u = A cos(theta) + B cos(2 theta), v = A sin(theta) + B sin(2 theta).
    Accepts scalar or array theta.
    """
    theta = np.asarray(theta, dtype=float)
    u = shape.A * np.cos(theta) + shape.B * np.cos(2.0 * theta)
    v = shape.A * np.sin(theta) + shape.B * np.sin(2.0 * theta)
    return u, v


def contains(shape: BilliardShape, u, v):
    """True where (u, v) lies strictly inside the billiard.

    Uses the polar form about the shifted center (-B, 0): the boundary is
    rho = A + 2B cos(phi) with rho, phi measured from (-B, 0), which is
    positive for lam < 0.5, so the inside test is a single radial
    comparison.  Accepts scalars or arrays.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    du = u + shape.B
    rho = np.hypot(du, v)
    # cos(phi) without calling atan2: rho = 0 only at the shifted center,
    # which is always interior, so guard the division.
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_phi = np.where(rho > 0.0, du / np.where(rho > 0.0, rho, 1.0), 1.0)
    inside = rho < shape.A + 2.0 * shape.B * cos_phi
    if inside.ndim == 0:
        return bool(inside)
    return inside


def boundary_quartic_residual(shape: BilliardShape, u, v):
    """Residual of the implicit Cartesian quartic at (u, v); zero on the boundary.

    ((u+B)^2 + v^2 - 2B(u+B))^2 - A^2 ((u+B)^2 + v^2)
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    du = u + shape.B
    rho2 = du * du + v * v
    return (rho2 - 2.0 * shape.B * du) ** 2 - shape.A ** 2 * rho2


def boundary_tangent_normal(shape: BilliardShape, theta):
    """Unit tangent and outward unit normal at boundary parameter theta.

    The tangent follows increasing theta; the normal is the tangent rotated
    by -90 degrees, which points outward for this counterclockwise
    parametrisation.  Raises BoundarySingularityError where the speed
    |dw/dtheta| vanishes (the lam = 0.5 cusp at theta = pi).
    """
    theta = float(theta)
    tx = -shape.A * np.sin(theta) - 2.0 * shape.B * np.sin(2.0 * theta)
    ty = shape.A * np.cos(theta) + 2.0 * shape.B * np.cos(2.0 * theta)
    speed = np.hypot(tx, ty)
    if speed < 1e-12:
        raise BoundarySingularityError(
            f"boundary tangent vanishes at theta={theta:.6g} (cusp)"
        )
    tangent = np.array([tx / speed, ty / speed])
    normal = np.array([tangent[1], -tangent[0]])
    return tangent, normal


def boundary_speed(shape: BilliardShape, theta):
    """|dw/dtheta| along the boundary: sqrt(A^2 + 4B^2 + 4AB cos(theta))."""
    theta = np.asarray(theta, dtype=float)
    return np.sqrt(
        shape.A ** 2 + 4.0 * shape.B ** 2 + 4.0 * shape.A * shape.B * np.cos(theta)
    )


@dataclass(frozen=True)
class GridSpec:
    """Uniform Cartesian grid: cell counts and domain extent.

    Samples sit at cell centers, x_i = x_min + (i + 1/2) dx, which keeps a
    symmetric extent symmetric about the origin and matches the cell-center
    rasterization convention.
    """

    nx: int
    ny: int
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        for n, name in ((self.nx, "nx"), (self.ny, "ny")):
            if n < 16 or (n & (n - 1)) != 0:
                raise DomainError(f"{name} must be a power of two >= 16, got {n}")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise DomainError("grid extent must be nonempty")

    @classmethod
    def square(cls, n: int, half_extent: float = 1.5) -> "GridSpec":
        return cls(n, n, -half_extent, half_extent, -half_extent, half_extent)

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.nx

    @property
    def dy(self):
        return (self.y_max - self.y_min) / self.ny

    @property
    def cell_area(self):
        return self.dx * self.dy

    @property
    def x(self):
        return self.x_min + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def y(self):
        return self.y_min + (np.arange(self.ny) + 0.5) * self.dy

    def meshgrid(self):
        return np.meshgrid(self.x, self.y, indexing="ij")

    def wavenumbers(self):
        """FFT-ordered angular wavenumber axes (kx, ky)."""
        kx = 2.0 * np.pi * np.fft.fftfreq(self.nx, d=self.dx)
        ky = 2.0 * np.pi * np.fft.fftfreq(self.ny, d=self.dy)
        return kx, ky

    def contains_disk(self, radius: float) -> bool:
        return (
            self.x_min < -radius
            and self.x_max > radius
            and self.y_min < -radius
            and self.y_max > radius
        )


@dataclass(frozen=True)
class PotentialField:
    """Two-valued hard-wall potential on a grid: 0 inside, v_out outside."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)
    v_out: float

    @property
    def interior_mask(self):
        return self.values == 0.0

    def interior_area(self):
        return float(np.count_nonzero(self.interior_mask)) * self.grid.cell_area


def rasterize_potential(
    shape: BilliardShape, grid: GridSpec, v_out: float = 1e12
) -> PotentialField:
    """Sample the hard-wall potential on the grid by cell-center membership.

    A cell is interior (value 0) iff its center is inside the billiard;
    otherwise it takes v_out.  Raises DomainError if the grid extent does
    not contain the billiard.
    """
    if v_out <= 0.0:
        raise DomainError(f"v_out must be positive, got {v_out}")
    if not grid.contains_disk(shape.max_radius):
        raise DomainError(
            f"grid extent does not contain the billiard "
            f"(max radius {shape.max_radius:.6g})"
        )
    xx, yy = grid.meshgrid()
    inside = contains(shape, xx, yy)
    values = np.where(inside, 0.0, v_out)
    return PotentialField(grid=grid, values=values, v_out=v_out)
