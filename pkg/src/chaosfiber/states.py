"""Initial wavefunctions: coherent and squeezed coherent packets.

1D packets are built in the position basis with the wavelength analog
lambda_w playing the role of hbar; 2D inputs are tensor products of two
1D packets.  A real squeeze parameter zeta < 0 means (r = |zeta|,
theta_s = pi), i.e. reduced position variance (lambda_w/2) e^{-2r}.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import GridSpec


@dataclass(frozen=True)
class SqueezedParams:
    """One axis of a squeezed coherent packet.

    q, p: phase-space center; r >= 0 and theta_s encode the squeeze
    zeta = r e^{i theta_s}; lambda_w > 0 is the hbar analog.
    """

    q: float = 0.0
    p: float = 0.0
    r: float = 0.0
    theta_s: float = 0.0
    lambda_w: float = 0.01

    def __post_init__(self):
        if self.lambda_w <= 0.0:
            raise DomainError(f"lambda_w must be positive, got {self.lambda_w}")
        if self.r < 0.0:
            raise DomainError(f"squeeze magnitude r must be >= 0, got {self.r}")

    @classmethod
    def from_zeta(cls, q, p, zeta, lambda_w=0.01):
        """Real signed zeta: negative values squeeze the position quadrature."""
        r = abs(float(zeta))
        theta_s = np.pi if zeta < 0 else 0.0
        return cls(q=q, p=p, r=r, theta_s=theta_s, lambda_w=lambda_w)


@dataclass(frozen=True)
class ScalarField2D:
    """Complex transverse field amplitude on a Cartesian grid, L2-normalized."""

    grid: GridSpec
    amp: np.ndarray
    lambda_w: float

    def norm(self) -> float:
        """Discrete L2 norm integral, sum |amp|^2 * cell area."""
        return float(np.sum(np.abs(self.amp) ** 2) * self.grid.cell_area)


def squeezed_coherent_1d(params: SqueezedParams, axis_samples: np.ndarray):
    """Sample the squeezed coherent state on a uniform 1D axis.

    psi(x) = (pi hbar)^{-1/4} (cosh r + e^{i theta_s} sinh r)^{-1/2}
             exp{ -Gamma (x-q)^2 / (2 hbar) + i p (x - q/2) / hbar }

    with Gamma = (cosh r - e^{i theta_s} sinh r)/(cosh r + e^{i theta_s} sinh r)
    and hbar -> lambda_w.  The result is renormalized on the discrete grid;
    the complex square root takes the principal branch.
    """
    x = np.asarray(axis_samples, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise DomainError("axis_samples must be a 1D array with at least 2 samples")
    dx = np.diff(x)
    if not np.allclose(dx, dx[0], rtol=0.0, atol=1e-12 * abs(dx[0])):
        raise DomainError("axis_samples must be uniformly spaced")
    dx = dx[0]
    psi = _unnormalized_1d(params, x)
    psi /= np.sqrt(np.sum(np.abs(psi) ** 2) * dx)
    return psi


def product_state_2d(
    params_x: SqueezedParams,
    params_y: SqueezedParams,
    grid: GridSpec,
    strict: bool = False,
) -> ScalarField2D:
    """Tensor product of two 1D packets, normalized on the grid.

    The continuum state is unit-norm, so a discrete-norm deficit beyond
    1e-6 before renormalization signals probability mass outside the grid;
    that raises DomainError in strict mode and warns otherwise.
    """
    if params_x.lambda_w != params_y.lambda_w:
        raise DomainError("both axes must share the same lambda_w")
    psi_x = _unnormalized_1d(params_x, grid.x)
    psi_y = _unnormalized_1d(params_y, grid.y)
    amp = np.outer(psi_x, psi_y)
    raw_norm = np.sum(np.abs(amp) ** 2) * grid.cell_area
    deficit = abs(1.0 - raw_norm)
    if deficit > 1e-6:
        msg = (
            f"packet mass outside grid: discrete norm deviates from 1 "
            f"by {deficit:.3e}"
        )
        if strict:
            raise DomainError(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    amp = amp / np.sqrt(raw_norm)
    return ScalarField2D(grid=grid, amp=amp, lambda_w=params_x.lambda_w)


def _unnormalized_1d(params: SqueezedParams, x):
    """Continuum-normalized 1D packet without the discrete renormalization."""
    lw = params.lambda_w
    ez = np.exp(1j * params.theta_s)
    denom = np.cosh(params.r) + ez * np.sinh(params.r)
    gamma = (np.cosh(params.r) - ez * np.sinh(params.r)) / denom
    prefactor = (np.pi * lw) ** -0.25 / np.sqrt(denom)
    return prefactor * np.exp(
        -gamma * (x - params.q) ** 2 / (2.0 * lw)
        + 1j * params.p * (x - params.q / 2.0) / lw
    )


def position_expectation(field: ScalarField2D):
    """(<x>, <y>) under |amp|^2."""
    xx, yy = field.grid.meshgrid()
    w = np.abs(field.amp) ** 2 * field.grid.cell_area
    return float(np.sum(xx * w)), float(np.sum(yy * w))


def momentum_expectation(field: ScalarField2D):
    """(<p_x>, <p_y>) computed spectrally with p = lambda_w k."""
    kx, ky = field.grid.wavenumbers()
    amp_hat = np.fft.fft2(field.amp)
    w = np.abs(amp_hat) ** 2
    w_sum = np.sum(w)
    px = field.lambda_w * float(np.sum(kx[:, None] * w) / w_sum)
    py = field.lambda_w * float(np.sum(ky[None, :] * w) / w_sum)
    return px, py
