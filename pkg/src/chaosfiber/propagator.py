"""Split-step Fourier evolution of the transverse field along the fiber.

One Strang step is a half potential factor, a full kinetic factor
exp(-i lambda_w (kx^2 + ky^2) dz / (2 n0)) applied in Fourier space, and a
second half potential factor.  dz plays the role of a time step with the
wavelength analog lambda_w as hbar.  In imaginary-tau mode both factors
become decaying exponentials and the field is renormalized every step,
which drives the field toward the lowest mode; with the default hard-wall
height the exterior decay factor underflows to zero, i.e. an exact mask.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .errors import DomainError, NumericalBlowupError
from .geometry import PotentialField
from .states import ScalarField2D

REAL_Z = "real_z"
IMAGINARY_TAU = "imaginary_tau"
PHASE_POTENTIAL = "phase_potential"
DIRICHLET_MASK = "dirichlet_mask"


@dataclass(frozen=True)
class PropagatorPlan:
    """Precomputed step factors for one (potential, lambda_w, dz) combination.

    mode: real_z evolves the physical field (dz may be negative to run
    backward); imaginary_tau relaxes toward the ground mode and requires
    dz > 0.  boundary_mode phase_potential applies the potential as a phase
    (unitary); dirichlet_mask instead zeroes the field outside the billiard.
    """

    potential: PotentialField
    lambda_w: float
    dz: float
    n0: float = 1.0
    mode: str = REAL_Z
    boundary_mode: str = PHASE_POTENTIAL
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.lambda_w <= 0.0:
            raise DomainError(f"lambda_w must be positive, got {self.lambda_w}")
        if self.n0 <= 0.0:
            raise DomainError(f"n0 must be positive, got {self.n0}")
        if self.mode not in (REAL_Z, IMAGINARY_TAU):
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.boundary_mode not in (PHASE_POTENTIAL, DIRICHLET_MASK):
            raise DomainError(f"unknown boundary_mode {self.boundary_mode!r}")
        if self.dz == 0.0:
            raise DomainError("dz must be nonzero")
        if self.mode == IMAGINARY_TAU and self.dz < 0.0:
            raise DomainError("imaginary_tau requires dz > 0")
        grid = self.potential.grid
        kx, ky = grid.wavenumbers()
        k2 = kx[:, None] ** 2 + ky[None, :] ** 2
        if self.mode == REAL_Z:
            kinetic = np.exp(-0.5j * self.lambda_w * k2 * self.dz / self.n0)
            v_half = np.exp(-0.5j * self.potential.values * self.dz / self.lambda_w)
        else:
            kinetic = np.exp(-0.5 * self.lambda_w * k2 * self.dz / self.n0)
            v_half = np.exp(-0.5 * self.potential.values * self.dz / self.lambda_w)
        tables = {
            "kinetic": kinetic,
            "v_half": v_half,
            "v_full": v_half * v_half,
            "mask": self.potential.interior_mask,
        }
        object.__setattr__(self, "_tables", tables)

    def reversed(self) -> "PropagatorPlan":
        """Plan for stepping backward (negated dz); real_z only."""
        return PropagatorPlan(
            potential=self.potential,
            lambda_w=self.lambda_w,
            dz=-self.dz,
            n0=self.n0,
            mode=self.mode,
            boundary_mode=self.boundary_mode,
        )


def _apply_boundary_half(amp, plan):
    if plan.boundary_mode == PHASE_POTENTIAL:
        amp *= plan._tables["v_half"]
    else:
        amp *= plan._tables["mask"]


def _apply_kinetic(amp, plan):
    out = scipy.fft.ifft2(scipy.fft.fft2(amp) * plan._tables["kinetic"])
    return out


def step(fld: ScalarField2D, plan: PropagatorPlan) -> ScalarField2D:
    """Advance one Strang step and return the new field.

    Raises NumericalBlowupError if non-finite amplitudes appear.
    """
    if fld.grid != plan.potential.grid:
        raise DomainError("field grid does not match the propagator plan grid")
    amp = fld.amp.astype(np.complex128, copy=True)
    _apply_boundary_half(amp, plan)
    amp = _apply_kinetic(amp, plan)
    _apply_boundary_half(amp, plan)
    if plan.mode == IMAGINARY_TAU:
        nrm = np.sqrt(np.sum(np.abs(amp) ** 2) * fld.grid.cell_area)
        if nrm == 0.0:
            raise NumericalBlowupError("field decayed to zero", step=1)
        amp /= nrm
    if not np.all(np.isfinite(amp)):
        raise NumericalBlowupError("non-finite amplitude after step", step=1)
    return ScalarField2D(grid=fld.grid, amp=amp, lambda_w=fld.lambda_w)


def energy_expectation(fld: ScalarField2D, potential: PotentialField, n0: float = 1.0):
    """<H> = spectral kinetic energy plus the potential expectation."""
    grid = fld.grid
    kx, ky = grid.wavenumbers()
    k2 = kx[:, None] ** 2 + ky[None, :] ** 2
    amp_hat = scipy.fft.fft2(fld.amp)
    w = np.abs(amp_hat) ** 2
    kinetic = 0.5 * fld.lambda_w ** 2 / n0 * float(np.sum(k2 * w) / np.sum(w))
    pot = float(np.sum(potential.values * np.abs(fld.amp) ** 2) * grid.cell_area)
    return kinetic + pot


def propagate(
    fld: ScalarField2D,
    plan: PropagatorPlan,
    z_end: float,
    probe=None,
    probe_interval: float = None,
) -> ScalarField2D:
    """Repeat Strang steps to z_end, invoking the probe at a fixed z interval.

    z_end must be a whole number of steps; probe_interval must be a whole
    multiple of |dz| (defaults to probing only at z = 0 and z = z_end).
    The probe receives (z, field) with a read-only amplitude view and must
    not mutate the field.
    """
    if z_end < 0.0:
        raise DomainError("z_end must be >= 0; use a negative-dz plan to reverse")
    n_steps = int(round(z_end / abs(plan.dz)))
    if abs(n_steps * abs(plan.dz) - z_end) > 1e-9 * max(1.0, abs(z_end)):
        raise DomainError("z_end must be an integer multiple of dz")
    if probe_interval is None:
        stride = n_steps if n_steps > 0 else 1
    else:
        stride = int(round(probe_interval / abs(plan.dz)))
        if stride <= 0 or abs(stride * abs(plan.dz) - probe_interval) > 1e-9:
            raise DomainError("probe_interval must be a positive multiple of dz")

    amp = fld.amp.astype(np.complex128, copy=True)
    grid = fld.grid
    cell_area = grid.cell_area
    imag = plan.mode == IMAGINARY_TAU
    masked = plan.boundary_mode == DIRICHLET_MASK
    v_half = plan._tables["v_half"]
    v_full = plan._tables["v_full"]
    kinetic = plan._tables["kinetic"]
    mask = plan._tables["mask"]

    def emit(step_index):
        if probe is not None:
            view = amp.view()
            view.flags.writeable = False
            probe(step_index * plan.dz, ScalarField2D(grid, view, fld.lambda_w))

    emit(0)
    if n_steps == 0:
        return ScalarField2D(grid, amp, fld.lambda_w)

    # Merged Strang composition: between kinetic applications, the closing
    # half factor of one step and the opening half factor of the next
    # combine into one full factor except where a probe must observe the
    # field exactly at a step boundary.
    if masked:
        amp *= mask
    else:
        amp *= v_half
    for i in range(1, n_steps + 1):
        amp = scipy.fft.ifft2(scipy.fft.fft2(amp) * kinetic)
        last = i == n_steps
        at_boundary = last or (i % stride == 0)
        if masked:
            amp *= mask
        else:
            amp *= v_half if at_boundary else v_full
        if imag:
            nrm = np.sqrt(np.sum(np.abs(amp) ** 2) * cell_area)
            if nrm == 0.0:
                raise NumericalBlowupError("field decayed to zero", step=i)
            amp /= nrm
        if not np.all(np.isfinite(amp)):
            raise NumericalBlowupError("non-finite amplitude", step=i)
        if at_boundary:
            emit(i)
            if not last and not masked:
                amp *= v_half
    return ScalarField2D(grid, amp, fld.lambda_w)
