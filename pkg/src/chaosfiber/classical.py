"""Classical ray dynamics in the billiard: bounce map and Poincaré sections.

Rays travel in straight chords between specular reflections off the
boundary.  Successive impacts are recorded in Birkhoff coordinates
(normalized arclength s, tangential momentum p_t), the canonical surface
of section for billiards.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError
from .geometry import (
    BilliardShape,
    boundary_point,
    boundary_speed,
    boundary_tangent_normal,
    contains,
)

# Ray marching: bracket the boundary crossing in steps of MARCH_STEP along
# the chord (robust for the non-convex shapes at lam > 0.25), then bisect.
MARCH_STEP = 0.01
BISECT_TOL = 1e-12
LAUNCH_EPS = 1e-9
MAX_PATH = 4.0


@dataclass(frozen=True)
class RayState:
    """Boundary parameter of the current bounce point and the outgoing direction."""

    theta_b: float
    direction: tuple

    def __post_init__(self):
        d = np.hypot(*self.direction)
        if abs(d - 1.0) > 1e-9:
            raise DomainError("direction must be a unit vector")


@dataclass(frozen=True)
class BirkhoffPoint:
    """Normalized arclength s in [0, 1) and tangential momentum p_t in [-1, 1]."""

    s: float
    p_t: float


def launch(shape: BilliardShape, theta_b: float, p_t: float) -> RayState:
    """Ray leaving the boundary at theta_b with tangential momentum p_t."""
    if not -1.0 < p_t < 1.0:
        raise DomainError(f"p_t must be in (-1, 1) to launch inward, got {p_t}")
    tangent, normal = boundary_tangent_normal(shape, theta_b)
    direction = p_t * tangent - np.sqrt(1.0 - p_t * p_t) * normal
    return RayState(theta_b=float(theta_b), direction=(direction[0], direction[1]))


def _radial_gap(shape, x, y):
    """rho - R(phi) about the shifted center; negative strictly inside."""
    du = x + shape.B
    rho = np.hypot(du, y)
    if rho == 0.0:
        return -(shape.A + 2.0 * shape.B)
    return rho - (shape.A + 2.0 * shape.B * du / rho)


def bounce(shape: BilliardShape, state: RayState) -> RayState:
    """Trace the ray to the next boundary hit and reflect specularly.

    The crossing is bracketed by marching along the chord and refined by
    bisection; the first sign change wins, which picks the nearest
    intersection for non-convex boundaries.  Raises GeometryError if no
    crossing is found within the maximum chord length.
    """
    if shape.lam >= 0.5:
        raise DomainError("bounce map requires lam < 0.5 (cusp excluded)")
    x0, y0 = boundary_point(shape, state.theta_b)
    dx, dy = state.direction

    def gap(t):
        return _radial_gap(shape, x0 + t * dx, y0 + t * dy)

    t_lo = LAUNCH_EPS
    g_lo = gap(t_lo)
    if g_lo >= 0.0:
        raise GeometryError(
            f"ray does not enter the interior at theta_b={state.theta_b:.6g}"
        )
    t_hi = t_lo
    while True:
        t_hi = min(t_hi + MARCH_STEP, MAX_PATH)
        g_hi = gap(t_hi)
        if g_hi >= 0.0:
            break
        if t_hi >= MAX_PATH:
            raise GeometryError("no boundary crossing within the maximum path length")
        t_lo = t_hi
    while t_hi - t_lo > BISECT_TOL:
        t_mid = 0.5 * (t_lo + t_hi)
        if gap(t_mid) < 0.0:
            t_lo = t_mid
        else:
            t_hi = t_mid
    t_hit = 0.5 * (t_lo + t_hi)

    xh, yh = x0 + t_hit * dx, y0 + t_hit * dy
    theta_hit = np.arctan2(yh, xh + shape.B) % (2.0 * np.pi)
    tangent, normal = boundary_tangent_normal(shape, theta_hit)
    d = np.array([dx, dy])
    d_out = d - 2.0 * np.dot(d, normal) * normal
    d_out /= np.hypot(*d_out)
    return RayState(theta_b=float(theta_hit), direction=(d_out[0], d_out[1]))


class ArclengthTable:
    """Cumulative boundary arclength s(theta), Simpson-integrated speed."""

    def __init__(self, shape: BilliardShape, n_panels: int = 4096):
        thetas = np.linspace(0.0, 2.0 * np.pi, 2 * n_panels + 1)
        speeds = boundary_speed(shape, thetas)
        # composite Simpson on each panel [theta_{2i}, theta_{2i+2}]
        width = thetas[2] - thetas[0]
        panels = (speeds[:-2:2] + 4.0 * speeds[1::2] + speeds[2::2]) * width / 6.0
        cumulative = np.concatenate([[0.0], np.cumsum(panels)])
        self.theta_nodes = thetas[::2]
        self.cumulative = cumulative
        self.total = float(cumulative[-1])

    def s(self, theta):
        """Normalized arclength in [0, 1) at boundary parameter theta."""
        theta = np.asarray(theta, dtype=float) % (2.0 * np.pi)
        return np.interp(theta, self.theta_nodes, self.cumulative) / self.total


def birkhoff_point(shape, table: ArclengthTable, state: RayState) -> BirkhoffPoint:
    """Birkhoff coordinates of a bounce: (s, direction . tangent)."""
    tangent, _ = boundary_tangent_normal(shape, state.theta_b)
    p_t = float(np.dot(state.direction, tangent))
    return BirkhoffPoint(s=float(table.s(state.theta_b)), p_t=p_t)


def poincare_section(
    shape: BilliardShape,
    initial: RayState,
    n_bounces: int,
    table: ArclengthTable = None,
):
    """Iterate the bounce map, recording Birkhoff coordinates at each impact."""
    if n_bounces < 1:
        raise DomainError(f"n_bounces must be >= 1, got {n_bounces}")
    if table is None:
        table = ArclengthTable(shape)
    points = []
    state = initial
    for _ in range(n_bounces):
        state = bounce(shape, state)
        points.append(birkhoff_point(shape, table, state))
    return points


def coverage_fraction(points, n_cells: int = 50) -> float:
    """Occupied-cell fraction of the (s, p_t) section on an n x n grid."""
    s = np.array([p.s for p in points])
    pt = np.array([p.p_t for p in points])
    i = np.clip((s * n_cells).astype(int), 0, n_cells - 1)
    j = np.clip(((pt + 1.0) * 0.5 * n_cells).astype(int), 0, n_cells - 1)
    return float(len(set(zip(i.tolist(), j.tolist()))) / (n_cells * n_cells))
