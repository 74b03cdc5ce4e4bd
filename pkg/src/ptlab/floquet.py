"""Effective z-averaged couplings and the effective Hamiltonian.

The high-frequency average of the drive phase e^{i eta(z)} renormalizes
every tunneling T_n to T_n * coupling, with coupling given in closed
form by Bessel sums for monochromatic, bichromatic, and factorized
polychromatic drives, and by brute-force Simpson averaging as an
independent numerical oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j, bessel_j_batch
from .lattice import LatticeSpec, ModulationSpec, eta_array

MAGNITUDE_TOL = 1e-10   # slack on the |coupling| <= 1 invariant
TERM_CUTOFF = 1e-15     # bichromatic terms dropped when both factors are below this
QUADRATURE_WARN = 1e-6  # half-resolution disagreement that flags the numeric result


@dataclass(frozen=True)
class EffectiveCoupling:
    """Complex ratio T_eff / T for one bond.

    ``value`` carries the gauge convention of the closed forms (drive
    integral taken without the lower-limit phase constant).  Numeric
    averages additionally keep the raw average, which differs from
    ``value`` by the global unit-modulus factor e^{-i sum_i
    (kappa_i/beta_i) sin(phi_i)}; magnitudes agree.
    """

    value: complex
    raw_value: complex | None = None
    accuracy_warning: bool = False

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        if self.raw_value is None:
            object.__setattr__(self, "raw_value", self.value)
        else:
            object.__setattr__(self, "raw_value", complex(self.raw_value))
        if abs(self.value) > 1.0 + MAGNITUDE_TOL:
            raise ValueError(
                f"|coupling| = {abs(self.value)} exceeds 1: averages of a "
                "unit-modulus phase cannot"
            )

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    @property
    def peierls_phase(self) -> float:
        return cmath.phase(self.value)


@dataclass(frozen=True)
class RationalBeta:
    """Frequency ratio beta = p/q, stored in lowest terms."""

    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p <= 0 or q <= 0:
            raise ValueError("p and q must be positive integers")
        g = math.gcd(p, q)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)

    @property
    def value(self) -> float:
        return self.p / self.q


def default_m_max(*kappas: float) -> int:
    """Truncation order: Bessel factors decay super-exponentially past this."""
    peak = max((abs(k) for k in kappas), default=0.0)
    return int(math.ceil(peak)) + 40


def effective_coupling_monochromatic(l: int, kappa: float, phi: float = 0.0) -> EffectiveCoupling:
    """Single-tone drive at the base frequency: J_{-l}(kappa) e^{-i l phi}."""
    value = bessel_j(-int(l), kappa) * cmath.exp(-1j * l * phi)
    return EffectiveCoupling(value)


def effective_coupling_bichromatic(
    l: int,
    kappa1: float,
    phi1: float,
    beta: RationalBeta | float,
    kappa2: float,
    phi2: float,
    m_max: int | None = None,
) -> EffectiveCoupling:
    """Two-tone drive: base-frequency tone plus a tone at ratio beta.

    Rational beta = p/q sums the resonance set m = q*k, the only indices
    where the averaged phase survives with an integer Bessel order:

        e^{-i l phi1} sum_k e^{i q k (phi2 - beta phi1)}
                      J_{-l-pk}(kappa1) J_{qk}(kappa2/beta)

    A plain float beta is treated as caller-declared irrational, where
    only the k = 0 term survives: J_{-l}(kappa1) J_0(kappa2/beta)
    e^{-i l phi1}.
    """
    l = int(l)
    if isinstance(beta, RationalBeta):
        beta_value = beta.value
    else:
        beta_value = float(beta)
        if not math.isfinite(beta_value) or beta_value <= 0.0:
            raise ValueError("beta must be finite and > 0")
    x2 = kappa2 / beta_value
    if not isinstance(beta, RationalBeta):
        value = bessel_j(-l, kappa1) * bessel_j(0, x2) * cmath.exp(-1j * l * phi1)
        return EffectiveCoupling(value)

    p, q = beta.p, beta.q
    if m_max is None:
        m_max = default_m_max(kappa1, x2)
    k_max = m_max // q
    order1 = abs(l) + p * k_max  # largest |order| of the kappa1 factor
    order2 = q * k_max
    j1 = bessel_j_batch(order1, kappa1)
    j2 = bessel_j_batch(order2, x2)

    def j_signed(batch: np.ndarray, order: int) -> float:
        a = abs(order)
        v = float(batch[a])
        return -v if (order < 0 and a % 2 == 1) else v

    total = 0.0j
    rel_phase = q * (phi2 - beta_value * phi1)
    for k in range(-k_max, k_max + 1):
        f1 = j_signed(j1, -l - p * k)
        f2 = j_signed(j2, q * k)
        if abs(f1) < TERM_CUTOFF and abs(f2) < TERM_CUTOFF:
            continue
        total += f1 * f2 * cmath.exp(1j * k * rel_phase)
    value = total * cmath.exp(-1j * l * phi1)
    return EffectiveCoupling(value)


def effective_coupling_polychromatic_product(
    l: int,
    harmonic_kappas: list[float] | tuple[float, ...],
    irrational_kappa: float = 0.0,
    beta: float = 1.0,
) -> float:
    """Factorized magnitude for a harmonic series plus one irrational tone:

        J_0(kappa/beta) * prod_{m>=1} J_{-l}(kappa_m / m)

    truncated at the supplied harmonic list.  This is the closed product
    form; it factorizes over harmonics rather than coupling them through
    a joint resonance condition, so it can disagree with the numerical
    average (see effective_coupling_numeric) at two or more harmonics.
    """
    l = int(l)
    if not math.isfinite(beta) or beta <= 0.0:
        raise ValueError("beta must be finite and > 0")
    value = bessel_j(0, irrational_kappa / beta)
    for m, kappa_m in enumerate(harmonic_kappas, start=1):
        value *= bessel_j(-l, kappa_m / m)
    return value


def _simpson_average(values: np.ndarray, n_intervals: int) -> complex:
    """Composite Simpson average of uniformly sampled values (n even)."""
    w = np.ones(n_intervals + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return complex(np.dot(w, values) / (3.0 * n_intervals))


def effective_coupling_numeric(
    spec: ModulationSpec,
    window_periods: int = 1,
    steps_per_period: int = 4096,
) -> EffectiveCoupling:
    """Brute-force average (1/Z) * integral_0^Z e^{i eta(z)} dz.

    Z spans ``window_periods`` common periods when every tone is
    rational, or that many base periods otherwise.  The average is a
    composite Simpson rule with ``steps_per_period`` steps per base
    period.  ``accuracy_warning`` is set when the step budget is below
    the supported minimum or a half-resolution re-evaluation moves the
    result by more than 1e-6.
    """
    if window_periods < 1:
        raise ValueError("window_periods must be >= 1")
    warn = steps_per_period < 64
    n_base = window_periods * (spec.common_period_multiplier() if spec.is_periodic else 1)
    length = n_base * spec.base_period
    n = n_base * max(int(steps_per_period), 8)
    n += (-n) % 4  # divisible by 4 so the half grid is Simpson-compatible
    zs = np.linspace(0.0, length, n + 1)
    values = np.exp(1j * eta_array(spec, zs))
    raw = _simpson_average(values, n)
    coarse = _simpson_average(values[::2], n // 2)
    if abs(raw - coarse) > QUADRATURE_WARN:
        warn = True
    # divide out the lower-limit gauge factor so the value matches the closed forms
    gauge = sum((t.kappa / t.beta) * math.sin(t.phi) for t in spec.tones)
    value = raw * cmath.exp(1j * gauge)
    return EffectiveCoupling(value, raw_value=raw, accuracy_warning=warn)


def effective_coupling_formula(spec: ModulationSpec, m_max: int | None = None) -> EffectiveCoupling:
    """Closed-form coupling for the wired tone patterns.

    Supports an undriven spec (1 for l = 0, else 0), a single tone
    (rational or declared-irrational ratio), and two tones whose first
    ratio is 1.  Other patterns have no closed form here; use
    effective_coupling_numeric.
    """
    tones = spec.tones
    if len(tones) == 0:
        return EffectiveCoupling(1.0 if spec.l == 0 else 0.0)
    if len(tones) == 1:
        tone = tones[0]
        if tone.is_rational and tone.beta_pq == (1, 1):
            return effective_coupling_monochromatic(spec.l, tone.kappa, tone.phi)
        beta = RationalBeta(*tone.beta_pq) if tone.is_rational else tone.beta
        return effective_coupling_bichromatic(
            spec.l, 0.0, 0.0, beta, tone.kappa, tone.phi, m_max=m_max
        )
    if len(tones) == 2:
        first, second = tones
        if not (first.is_rational and first.beta_pq == (1, 1)):
            raise ValueError("two-tone closed form needs the first tone at ratio 1")
        beta = RationalBeta(*second.beta_pq) if second.is_rational else second.beta
        return effective_coupling_bichromatic(
            spec.l, first.kappa, first.phi, beta, second.kappa, second.phi, m_max=m_max
        )
    raise ValueError(
        "no closed form wired for more than two tones; use effective_coupling_numeric"
    )


def build_effective_hamiltonian(
    lattice: LatticeSpec, coupling: EffectiveCoupling | complex
) -> np.ndarray:
    """Averaged matrix: -T_n c on (n, n+1), -T_n conj(c) on (n+1, n), i gamma on the diagonal.

    The gradient term is absorbed by the averaging and does not appear.
    """
    c = coupling.value if isinstance(coupling, EffectiveCoupling) else complex(coupling)
    n = lattice.n_sites
    h = np.zeros((n, n), dtype=complex)
    for bond, t in enumerate(lattice.tunnelings[: n - 1]):
        h[bond, bond + 1] = -t * c
        h[bond + 1, bond] = -t * c.conjugate()
    if lattice.boundary == "periodic":
        t = lattice.tunnelings[n - 1]
        h[n - 1, 0] += -t * c
        h[0, n - 1] += -t * c.conjugate()
    h[np.diag_indices_from(h)] = 1j * np.asarray(lattice.gammas)
    return h
