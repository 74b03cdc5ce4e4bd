"""Eigenvalues, reality classification, and breaking-threshold search.

Dense complex spectra come from LAPACK with an explicit residual check;
the dimer, trimer, and dimerized-ring cases also have closed forms that
the test suite holds against the dense route.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bessel import bessel_j
from .floquet import EffectiveCoupling, build_effective_hamiltonian
from .lattice import LatticeSpec

DENSE_DIM_LIMIT = 256
RESIDUAL_TOL = 1e-10
DEFAULT_THRESHOLD_GRID = 64


class EigensolverError(RuntimeError):
    """Eigensolver failed to converge or produced unverifiable eigenpairs."""


def default_tol_im(eigenvalues) -> float:
    """Scale-aware reality tolerance: 1e-9 * max(1, spectral radius)."""
    radius = max((abs(e) for e in eigenvalues), default=0.0)
    return 1e-9 * max(1.0, radius)


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues sorted by (Re, Im) with a reality verdict at tol_im."""

    eigenvalues: tuple[complex, ...]
    max_abs_imag: float
    is_real: bool
    tol_im: float

    @classmethod
    def from_eigenvalues(cls, eigenvalues, tol_im: float | None = None) -> "SpectrumResult":
        eigs = tuple(sorted((complex(e) for e in eigenvalues), key=lambda e: (e.real, e.imag)))
        if tol_im is None:
            tol_im = default_tol_im(eigs)
        max_imag = max((abs(e.imag) for e in eigs), default=0.0)
        return cls(eigs, max_imag, max_imag < tol_im, tol_im)


def eigenvalues_dense(h: np.ndarray, tol_im: float | None = None) -> SpectrumResult:
    """All eigenvalues of a general dense complex matrix, residual-verified.

    Every eigenpair must satisfy ||(H - E I) v|| / ||H|| < 1e-10;
    non-convergence or a failed residual raises EigensolverError rather
    than returning silently wrong values.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("matrix must be square")
    dim = h.shape[0]
    if dim < 2 or dim > DENSE_DIM_LIMIT:
        raise ValueError(f"matrix dimension must be in [2, {DENSE_DIM_LIMIT}]")
    try:
        eigvals, eigvecs = np.linalg.eig(h)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver did not converge: {exc}") from exc
    scale = np.linalg.norm(h, 2)
    if scale > 0.0:
        residuals = np.linalg.norm(h @ eigvecs - eigvecs * eigvals, axis=0) / scale
        worst = float(residuals.max())
        if worst >= RESIDUAL_TOL:
            raise EigensolverError(f"eigenpair residual {worst:.3e} exceeds {RESIDUAL_TOL}")
    return SpectrumResult.from_eigenvalues(eigvals, tol_im=tol_im)


def dimer_spectrum(
    T: float, l: int, kappa: float, gamma: float, tol_im: float | None = None
) -> SpectrumResult:
    """Two-site closed form: E = -+ sqrt(|T J_{-l}(kappa)|^2 - gamma^2).

    Real pair when the radicand is nonnegative, conjugate imaginary pair
    otherwise.
    """
    if T <= 0.0:
        raise ValueError("T must be > 0")
    radicand = (T * bessel_j(-int(l), kappa)) ** 2 - gamma * gamma
    root = cmath.sqrt(complex(radicand))
    return SpectrumResult.from_eigenvalues((-root, root), tol_im=tol_im)


@dataclass(frozen=True)
class TrimerSpec:
    """Three-site chain with gain/loss profile (gamma, s gamma, -(1+s) gamma).

    coupling_mag is the magnitude of the effective coupling; the coupling
    phase is a gauge on an open chain and drops out of the spectrum.
    """

    T1: float
    T2: float
    s: float
    gamma: float
    coupling_mag: float

    def __post_init__(self):
        if self.T1 <= 0.0 or self.T2 <= 0.0:
            raise ValueError("tunnelings must be > 0")
        if self.coupling_mag < 0.0:
            raise ValueError("coupling_mag is a magnitude, must be >= 0")

    @property
    def gammas(self) -> tuple[float, float, float]:
        return (self.gamma, self.s * self.gamma, -(1.0 + self.s) * self.gamma)

    def lattice(self) -> LatticeSpec:
        return LatticeSpec(3, (self.T1, self.T2), self.gammas, "open")

    def hamiltonian(self) -> np.ndarray:
        return build_effective_hamiltonian(self.lattice(), EffectiveCoupling(self.coupling_mag))


def trimer_coefficients(spec: TrimerSpec) -> tuple[float, float]:
    """Coefficients (a, b) of the trimer characteristic cubic E^3 - a E - i b = 0."""
    j2 = spec.coupling_mag * spec.coupling_mag
    g, s = spec.gamma, spec.s
    a = (spec.T1**2 + spec.T2**2) * j2 - g * g * (1.0 + s + s * s)
    b = g * (g * g * s * (1.0 + s) + (spec.T1**2 * (1.0 + s) - spec.T2**2) * j2)
    return a, b


def trimer_spectrum(spec: TrimerSpec, tol_im: float | None = None) -> SpectrumResult:
    """Roots of E^3 - a E - i b = 0 via a 3x3 companion eigensolve.

    The b = 0, a >= 0 case returns {0, -+sqrt(a)} exactly.  Every root is
    checked against the cubic to 1e-10.
    """
    a, b = trimer_coefficients(spec)
    if b == 0.0 and a >= 0.0:
        root = math.sqrt(a)
        return SpectrumResult.from_eigenvalues((-root, 0.0, root), tol_im=tol_im)
    companion = np.array(
        [[0.0, 0.0, 1j * b], [1.0, 0.0, a], [0.0, 1.0, 0.0]], dtype=complex
    )
    roots = np.linalg.eigvals(companion)
    worst = max(abs(e**3 - a * e - 1j * b) for e in roots)
    if worst >= RESIDUAL_TOL:
        raise EigensolverError(f"cubic root residual {worst:.3e} exceeds {RESIDUAL_TOL}")
    return SpectrumResult.from_eigenvalues(roots, tol_im=tol_im)


def trimer_gamma_real_points(
    T1: float, T2: float, s: float, coupling_mag: float
) -> tuple[float, float]:
    """The two impurity strengths (gamma_minus, gamma_plus) where b vanishes:

        gamma_-+ = -+ coupling_mag * sqrt((T2^2 - T1^2 (1+s)) / (s (1+s)))

    Each named precondition raises a domain error on violation.
    """
    denom = s * (1.0 + s)
    if denom <= 0.0:
        raise ValueError(f"requires s(1+s) > 0, got s(1+s) = {denom}")
    if T2 * T2 <= T1 * T1 * denom:
        raise ValueError("requires T2^2 > T1^2 s(1+s)")
    numer = T2 * T2 - T1 * T1 * (1.0 + s)
    if numer < 0.0:
        raise ValueError("requires T2^2 >= T1^2 (1+s) for a real impurity strength")
    root = coupling_mag * math.sqrt(numer / denom)
    return (-root, root)


@dataclass(frozen=True)
class DimerizedRingSpec:
    """Periodic two-band chain: T_n = T on odd bonds, c T on even bonds,
    gamma_n = (-1)^n gamma, at Bloch momentum q in (-pi, pi]."""

    c: float
    T: float
    gamma: float
    coupling: EffectiveCoupling
    q: float

    def __post_init__(self):
        if self.c <= 0.0 or self.T <= 0.0:
            raise ValueError("c and T must be > 0")


def band_energy(spec: DimerizedRingSpec) -> tuple[complex, complex]:
    """Band pair E = -+ sqrt(((c-1)^2 + 4 c cos^2((q - Theta)/2)) |T_eff|^2 - gamma^2)."""
    theta = spec.coupling.peierls_phase
    t_eff_sq = (spec.T * spec.coupling.magnitude) ** 2
    bracket = (spec.c - 1.0) ** 2 + 4.0 * spec.c * math.cos(0.5 * (spec.q - theta)) ** 2
    root = cmath.sqrt(complex(bracket * t_eff_sq - spec.gamma**2))
    return (-root, root)


def dimerized_ring_bloch_matrix(spec: DimerizedRingSpec) -> np.ndarray:
    """2x2 Bloch matrix of the dimerized ring in the cell gauge.

    The Peierls phase appears as the relative phase between intra- and
    inter-cell hopping; its eigenvalues match band_energy exactly.
    """
    t_eff = spec.T * spec.coupling.magnitude
    delta = spec.q - spec.coupling.peierls_phase
    off = -t_eff * (1.0 + spec.c * cmath.exp(-1j * delta))
    return np.array(
        [[1j * spec.gamma, off], [off.conjugate(), -1j * spec.gamma]], dtype=complex
    )


@dataclass(frozen=True)
class ThresholdResult:
    """First breaking point of a gamma-parametrized family.

    gamma_star is None when the family stays real up to gamma_max;
    reentrant flags real cells found beyond the first breaking point.
    """

    gamma_star: float | None
    reentrant: bool

    @property
    def unbroken(self) -> bool:
        return self.gamma_star is None


def pt_threshold(
    builder: Callable[[float], np.ndarray],
    gamma_max: float,
    tol: float,
    grid_points: int = DEFAULT_THRESHOLD_GRID,
    tol_im: float | None = None,
) -> ThresholdResult:
    """Smallest gamma* in [0, gamma_max] where the spectrum first turns complex.

    Coarse grid scan followed by bisection to absolute precision tol.
    Reports the FIRST breaking point; later real cells (re-entrant
    families) set the reentrant flag instead of being averaged over.
    """
    if tol <= 0.0:
        raise ValueError("tol must be > 0")
    if gamma_max <= 0.0:
        raise ValueError("gamma_max must be > 0")
    grid = np.linspace(0.0, gamma_max, grid_points)
    broken = [not eigenvalues_dense(builder(g), tol_im=tol_im).is_real for g in grid]
    if not any(broken):
        return ThresholdResult(None, False)
    first = broken.index(True)
    reentrant = any(not b for b in broken[first + 1 :])
    if first == 0:
        return ThresholdResult(0.0, reentrant)
    lo, hi = grid[first - 1], grid[first]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if eigenvalues_dense(builder(mid), tol_im=tol_im).is_real:
            lo = mid
        else:
            hi = mid
    return ThresholdResult(0.5 * (lo + hi), reentrant)


def multiset_distance(a, b) -> float:
    """Greedy nearest-pair distance between two eigenvalue multisets.

    Pairs each element of ``a`` with its closest unused element of ``b``
    and returns the largest pair distance (inf on size mismatch).
    """
    a = [complex(x) for x in a]
    b = [complex(x) for x in b]
    if len(a) != len(b):
        return math.inf
    used = [False] * len(b)
    worst = 0.0
    for x in a:
        best_j, best_d = -1, math.inf
        for j, y in enumerate(b):
            if used[j]:
                continue
            d = abs(x - y)
            if d < best_d:
                best_j, best_d = j, d
        used[best_j] = True
        worst = max(worst, best_d)
    return worst
