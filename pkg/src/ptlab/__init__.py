"""ptlab: spectra, effective couplings, and pseudo-PT breaking thresholds
for periodically and quasi-periodically modulated non-Hermitian
tight-binding lattices."""

__version__ = "0.1.0"

from .bessel import bessel_j, bessel_j_batch, jacobi_anger_partial
from .config import ConfigError, RunConfig, ScanRange, load_config, parse_config
from .floquet import (
    EffectiveCoupling,
    RationalBeta,
    build_effective_hamiltonian,
    effective_coupling_bichromatic,
    effective_coupling_formula,
    effective_coupling_monochromatic,
    effective_coupling_numeric,
    effective_coupling_polychromatic_product,
)
from .lattice import (
    LatticeSpec,
    ModulationSpec,
    ModulationTone,
    eta,
    hamiltonian_at,
    potential_gradient,
)
from .propagation import MonodromyResult, StateVector, fold_quasi_energy, monodromy, propagate
from .spectra import (
    DimerizedRingSpec,
    EigensolverError,
    SpectrumResult,
    ThresholdResult,
    TrimerSpec,
    band_energy,
    dimer_spectrum,
    eigenvalues_dense,
    multiset_distance,
    pt_threshold,
    trimer_coefficients,
    trimer_gamma_real_points,
    trimer_spectrum,
)

__all__ = [
    "__version__",
    "bessel_j",
    "bessel_j_batch",
    "jacobi_anger_partial",
    "ConfigError",
    "RunConfig",
    "ScanRange",
    "load_config",
    "parse_config",
    "EffectiveCoupling",
    "RationalBeta",
    "build_effective_hamiltonian",
    "effective_coupling_bichromatic",
    "effective_coupling_formula",
    "effective_coupling_monochromatic",
    "effective_coupling_numeric",
    "effective_coupling_polychromatic_product",
    "LatticeSpec",
    "ModulationSpec",
    "ModulationTone",
    "eta",
    "hamiltonian_at",
    "potential_gradient",
    "MonodromyResult",
    "StateVector",
    "fold_quasi_energy",
    "monodromy",
    "propagate",
    "DimerizedRingSpec",
    "EigensolverError",
    "SpectrumResult",
    "ThresholdResult",
    "TrimerSpec",
    "band_energy",
    "dimer_spectrum",
    "eigenvalues_dense",
    "multiset_distance",
    "pt_threshold",
    "trimer_coefficients",
    "trimer_gamma_real_points",
    "trimer_spectrum",
]
