"""Data model for the modulated non-Hermitian lattice.

Holds the gradient drive f(z) = omega0*(l + sum_i kappa_i cos(beta_i
omega0 z + phi_i)), its exact integral eta(z), and the instantaneous
tight-binding matrix with site-linear gradient term and balanced
gain/loss on the diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

BALANCE_TOL = 1e-12

BOUNDARIES = ("open", "periodic")


@dataclass(frozen=True)
class ModulationTone:
    """One cosine tone of the gradient drive.

    ``beta_pq`` declares rationality: a reduced (p, q) pair when the
    frequency ratio is rational, None when the caller declares it
    irrational.  Rationality is never inferred from the float value.
    Negative amplitudes are normalized into the phase (kappa >= 0).
    """

    kappa: float
    beta: float
    phi: float = 0.0
    beta_pq: tuple[int, int] | None = None

    def __post_init__(self):
        if not (math.isfinite(self.kappa) and math.isfinite(self.beta) and math.isfinite(self.phi)):
            raise ValueError("tone parameters must be finite")
        if self.beta <= 0.0:
            raise ValueError("tone frequency ratio beta must be > 0")
        if self.kappa < 0.0:
            object.__setattr__(self, "kappa", -self.kappa)
            object.__setattr__(self, "phi", self.phi + math.pi)
        if self.beta_pq is not None:
            p, q = self.beta_pq
            if p <= 0 or q <= 0:
                raise ValueError("rational tag (p, q) must be positive integers")
            g = math.gcd(p, q)
            p, q = p // g, q // g
            object.__setattr__(self, "beta_pq", (p, q))
            object.__setattr__(self, "beta", p / q)

    @classmethod
    def rational(cls, kappa: float, p: int, q: int = 1, phi: float = 0.0) -> "ModulationTone":
        return cls(kappa=kappa, beta=p / q, phi=phi, beta_pq=(int(p), int(q)))

    @classmethod
    def irrational(cls, kappa: float, beta: float, phi: float = 0.0) -> "ModulationTone":
        return cls(kappa=kappa, beta=beta, phi=phi, beta_pq=None)

    @property
    def is_rational(self) -> bool:
        return self.beta_pq is not None


@dataclass(frozen=True)
class ModulationSpec:
    """dc index l, base frequency omega0, and the list of drive tones."""

    l: int
    omega0: float
    tones: tuple[ModulationTone, ...] = ()

    def __post_init__(self):
        if not math.isfinite(self.omega0) or self.omega0 <= 0.0:
            raise ValueError("omega0 must be finite and > 0")
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "tones", tuple(self.tones))

    @property
    def base_period(self) -> float:
        return 2.0 * math.pi / self.omega0

    @property
    def is_periodic(self) -> bool:
        return all(t.is_rational for t in self.tones)

    def common_period_multiplier(self) -> int:
        """Smallest n such that n base periods hold whole cycles of every tone."""
        if not self.is_periodic:
            raise ValueError("no common period: spec contains an irrational tone")
        mult = 1
        for tone in self.tones:
            mult = math.lcm(mult, tone.beta_pq[1])
        return mult

    def common_period(self) -> float:
        return self.common_period_multiplier() * self.base_period


@dataclass(frozen=True)
class LatticeSpec:
    """Site count, per-bond tunnelings, balanced gain/loss, boundary."""

    n_sites: int
    tunnelings: tuple[float, ...]
    gammas: tuple[float, ...]
    boundary: str = "open"

    def __post_init__(self):
        n = int(self.n_sites)
        object.__setattr__(self, "n_sites", n)
        object.__setattr__(self, "tunnelings", tuple(float(t) for t in self.tunnelings))
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        if n < 2:
            raise ValueError("lattice needs at least 2 sites")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")
        n_bonds = n - 1 if self.boundary == "open" else n
        if len(self.tunnelings) != n_bonds:
            raise ValueError(
                f"{self.boundary} boundary with {n} sites needs {n_bonds} tunnelings, "
                f"got {len(self.tunnelings)}"
            )
        if any(t <= 0.0 or not math.isfinite(t) for t in self.tunnelings):
            raise ValueError("tunnelings must be finite and > 0")
        if len(self.gammas) != n:
            raise ValueError(f"need one gamma per site ({n}), got {len(self.gammas)}")
        if any(not math.isfinite(g) for g in self.gammas):
            raise ValueError("gammas must be finite")
        scale = max(1.0, max(abs(g) for g in self.gammas))
        if abs(sum(self.gammas)) >= BALANCE_TOL * scale:
            raise ValueError(
                "gain/loss must balance: |sum(gammas)| = "
                f"{abs(sum(self.gammas)):.3e} violates sum_n gamma_n = 0"
            )

    @property
    def n_bonds(self) -> int:
        return len(self.tunnelings)


def potential_gradient(spec: ModulationSpec, z: float) -> float:
    """f(z) = omega0*(l + sum_i kappa_i cos(beta_i omega0 z + phi_i))."""
    if not math.isfinite(z):
        raise ValueError("z must be finite")
    total = float(spec.l)
    for tone in spec.tones:
        total += tone.kappa * math.cos(tone.beta * spec.omega0 * z + tone.phi)
    return spec.omega0 * total


def potential_gradient_array(spec: ModulationSpec, zs: np.ndarray) -> np.ndarray:
    """Vectorized f(z) over a grid."""
    zs = np.asarray(zs, dtype=float)
    total = np.full(zs.shape, float(spec.l))
    for tone in spec.tones:
        total += tone.kappa * np.cos(tone.beta * spec.omega0 * zs + tone.phi)
    return spec.omega0 * total


def eta(spec: ModulationSpec, z: float) -> float:
    """Exact integral of the gradient from 0 to z, no quadrature.

    eta(z) = l omega0 z + sum_i (kappa_i/beta_i)
             * (sin(beta_i omega0 z + phi_i) - sin(phi_i))
    """
    if not math.isfinite(z):
        raise ValueError("z must be finite")
    total = spec.l * spec.omega0 * z
    for tone in spec.tones:
        total += (tone.kappa / tone.beta) * (
            math.sin(tone.beta * spec.omega0 * z + tone.phi) - math.sin(tone.phi)
        )
    return total


def eta_array(spec: ModulationSpec, zs: np.ndarray) -> np.ndarray:
    """Vectorized eta(z) over a grid."""
    zs = np.asarray(zs, dtype=float)
    total = spec.l * spec.omega0 * zs
    for tone in spec.tones:
        total = total + (tone.kappa / tone.beta) * (
            np.sin(tone.beta * spec.omega0 * zs + tone.phi) - math.sin(tone.phi)
        )
    return total


def hopping_matrix(lattice: LatticeSpec) -> np.ndarray:
    """Bare hopping part: -T_n on bonds (n, n+1), wrap bond if periodic."""
    n = lattice.n_sites
    h = np.zeros((n, n), dtype=complex)
    for bond, t in enumerate(lattice.tunnelings[: n - 1]):
        h[bond, bond + 1] = -t
        h[bond + 1, bond] = -t
    if lattice.boundary == "periodic":
        t = lattice.tunnelings[n - 1]
        h[n - 1, 0] += -t
        h[0, n - 1] += -t
    return h


def hamiltonian_at(lattice: LatticeSpec, spec: ModulationSpec, z: float) -> np.ndarray:
    """Instantaneous matrix: hopping plus f(z)*n + i gamma_n on site n (n = 1..N)."""
    h = hopping_matrix(lattice)
    f = potential_gradient(spec, z)
    sites = np.arange(1, lattice.n_sites + 1, dtype=float)
    h[np.diag_indices_from(h)] = f * sites + 1j * np.asarray(lattice.gammas)
    return h
