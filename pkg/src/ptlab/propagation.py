"""Exact z-dependent dynamics and the one-period monodromy spectrum.

i d psi/dz = H(z) psi is integrated with a fixed-step classical
fourth-order Runge-Kutta scheme; fixed steps keep monodromy products
bit-for-bit reproducible across runs.  Quasi-energies come from the
principal logarithm of the monodromy eigenvalues, folded into the first
zone (-omega0/2, omega0/2] by real part.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .lattice import (
    LatticeSpec,
    ModulationSpec,
    hopping_matrix,
    potential_gradient_array,
)

OVERFLOW_LIMIT = 1e100
MIN_STEPS_PER_PERIOD = 64
MIN_MONODROMY_STEPS = 512
DEFAULT_STEPS_PER_PERIOD = 2048
_OVERFLOW_CHECK_EVERY = 16


@dataclass(frozen=True, eq=False)
class StateVector:
    """Mode amplitudes at position z; overflow marks an aborted broken-phase run."""

    amplitudes: np.ndarray
    z: float
    overflow: bool = False

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a nonempty vector")
        object.__setattr__(self, "amplitudes", amps)
        if not self.overflow and self.power == 0.0:
            raise ValueError("state must carry nonzero power")

    @property
    def power(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True, eq=False)
class MonodromyResult:
    """One-period propagator and its folded quasi-energy spectrum."""

    matrix: np.ndarray
    quasi_energies: tuple[complex, ...]
    period: float
    omega0: float


def _rk4_run(lattice, spec, psi, z0, z1, steps, record_every=None):
    """Fixed-step RK4 on columns of psi; returns (samples, psi, z_reached, overflow).

    The gradient f(z) is pre-evaluated on the half-step grid so the inner
    loop is pure linear algebra.  samples is populated only when
    record_every is given.
    """
    hop = hopping_matrix(lattice)
    static_diag = 1j * np.asarray(lattice.gammas, dtype=complex)
    sites = np.arange(1, lattice.n_sites + 1, dtype=float)
    h = (z1 - z0) / steps
    f_grid = potential_gradient_array(spec, z0 + 0.5 * h * np.arange(2 * steps + 1))

    def deriv(f_value, state):
        diag = (f_value * sites + static_diag)[:, None]
        return -1j * (hop @ state + diag * state)

    psi = np.array(psi, dtype=complex)
    if psi.ndim == 1:
        psi = psi[:, None]
    samples = []
    if record_every:
        samples.append((z0, psi.copy()))
    for i in range(steps):
        f0, f1, f2 = f_grid[2 * i], f_grid[2 * i + 1], f_grid[2 * i + 2]
        k1 = deriv(f0, psi)
        k2 = deriv(f1, psi + 0.5 * h * k1)
        k3 = deriv(f1, psi + 0.5 * h * k2)
        k4 = deriv(f2, psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if i % _OVERFLOW_CHECK_EVERY == 0 or i == steps - 1:
            peak = np.max(np.abs(psi))
            if not np.isfinite(peak) or peak > OVERFLOW_LIMIT:
                return samples, psi, z0 + (i + 1) * h, True
        if record_every and ((i + 1) % record_every == 0 or i == steps - 1):
            samples.append((z0 + (i + 1) * h, psi.copy()))
    return samples, psi, z1, False


def _required_steps(spec: ModulationSpec, span: float) -> int:
    periods = span / spec.base_period
    return max(1, math.ceil(MIN_STEPS_PER_PERIOD * periods))


def propagate(
    lattice: LatticeSpec,
    spec: ModulationSpec,
    psi0: StateVector | np.ndarray,
    z_end: float,
    steps: int,
) -> StateVector:
    """State at z_end from fixed-step RK4 integration of i d psi/dz = H(z) psi.

    Exponential growth past 1e100 returns a StateVector flagged
    overflow at the position reached, never a crash.
    """
    if isinstance(psi0, StateVector):
        z0, amps = psi0.z, psi0.amplitudes
    else:
        z0, amps = 0.0, np.asarray(psi0, dtype=complex)
    if len(amps) != lattice.n_sites:
        raise ValueError("initial state length must match the lattice")
    span = z_end - z0
    if span <= 0.0:
        raise ValueError("z_end must exceed the initial position")
    required = _required_steps(spec, span)
    if steps < required:
        raise ValueError(
            f"steps = {steps} below the {MIN_STEPS_PER_PERIOD}-per-base-period minimum ({required})"
        )
    _, psi, z_reached, overflow = _rk4_run(lattice, spec, amps, z0, z_end, steps)
    return StateVector(psi[:, 0], z_reached, overflow=overflow)


def propagate_samples(
    lattice: LatticeSpec,
    spec: ModulationSpec,
    psi0: StateVector | np.ndarray,
    z_end: float,
    steps: int,
    record_every: int,
) -> list[StateVector]:
    """Trace of states every record_every steps (first and last included)."""
    if isinstance(psi0, StateVector):
        z0, amps = psi0.z, psi0.amplitudes
    else:
        z0, amps = 0.0, np.asarray(psi0, dtype=complex)
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    required = _required_steps(spec, z_end - z0)
    if steps < required:
        raise ValueError(
            f"steps = {steps} below the {MIN_STEPS_PER_PERIOD}-per-base-period minimum ({required})"
        )
    samples, psi, z_reached, overflow = _rk4_run(
        lattice, spec, amps, z0, z_end, steps, record_every=record_every
    )
    out = [StateVector(s[:, 0], z, overflow=False) for z, s in samples]
    if overflow:
        out.append(StateVector(psi[:, 0], z_reached, overflow=True))
    return out


def fold_quasi_energy(energy: complex, omega0: float) -> complex:
    """Shift the real part by multiples of omega0 into (-omega0/2, omega0/2]."""
    re = energy.real - omega0 * round(energy.real / omega0)
    if re <= -0.5 * omega0:
        re += omega0
    return complex(re, energy.imag)


class EigenvalueOverflowError(OverflowError):
    """Raised when monodromy integration leaves the representable range."""


def monodromy(
    lattice: LatticeSpec, spec: ModulationSpec, steps: int | None = None
) -> MonodromyResult:
    """Propagator over one common modulation period and its quasi-energies.

    Requires every tone rational (a common period must exist).  steps is
    the total step count across the period; the default is 2048 per base
    period covered.
    """
    if not spec.is_periodic:
        raise ValueError("monodromy needs a periodic drive: every tone must be rational")
    n_base = spec.common_period_multiplier()
    period = n_base * spec.base_period
    if steps is None:
        steps = DEFAULT_STEPS_PER_PERIOD * n_base
    if steps < MIN_MONODROMY_STEPS:
        raise ValueError(f"monodromy needs steps >= {MIN_MONODROMY_STEPS}")
    identity = np.eye(lattice.n_sites, dtype=complex)
    _, u, _, overflow = _rk4_run(lattice, spec, identity, 0.0, period, steps)
    if overflow:
        raise EigenvalueOverflowError("monodromy columns overflowed during integration")
    det = np.linalg.det(u)
    if det == 0.0:
        raise ValueError("monodromy matrix is singular")
    lams = np.linalg.eigvals(u)
    quasi = [fold_quasi_energy(1j * cmath.log(lam) / period, spec.omega0) for lam in lams]
    quasi.sort(key=lambda e: (e.real, e.imag))
    return MonodromyResult(u, tuple(quasi), period, spec.omega0)
