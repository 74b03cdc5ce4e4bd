"""Scenario runners behind the CLI: sweeps, thresholds, traces, CSV output.

All output is deterministic: fixed step counts, shortest round-trip
float formatting, LF line endings, and buffered writes in grid order no
matter how many workers computed the cells.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig
from .floquet import build_effective_hamiltonian, effective_coupling_formula, effective_coupling_numeric
from .lattice import LatticeSpec, ModulationSpec
from .propagation import propagate_samples
from .spectra import default_tol_im, eigenvalues_dense, pt_threshold

HEADERS = {
    "spectrum": ("eig_index", "re_E", "im_E"),
    "scan_kappa": ("kappa", "eig_index", "re_E", "im_E"),
    "scan_kappa_summary": ("kappa", "max_abs_imag", "is_real"),
    "phase_diagram": ("kappa", "gamma_sq_over_T_sq", "max_abs_imag", "is_real"),
    "threshold": (
        "n_sites", "boundary", "l", "omega0", "kappa", "phi", "gamma_max", "tol", "gamma_star",
    ),
    "propagate": ("z", "site", "re_psi", "im_psi", "power", "status"),
    "effective_coupling": (
        "source", "re_value", "im_value", "magnitude", "peierls_phase", "accuracy_warning",
    ),
}


def format_value(value) -> str:
    """Shortest round-trip text for one CSV cell."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(format_value(v) for v in row) + "\n")


@dataclass
class PhaseDiagram:
    """Reality grid over (kappa, gamma^2/T^2); every cell is computed."""

    kappa_axis: tuple[float, ...]
    gamma_sq_axis: tuple[float, ...]
    max_abs_imag: np.ndarray  # shape (len(kappa_axis), len(gamma_sq_axis))
    is_real: np.ndarray


@dataclass
class ScanOutput:
    rows: list[tuple]
    summary_rows: list[tuple] | None = None
    phase_diagram: PhaseDiagram | None = None
    samples: list | None = None
    overflow: bool = False


def _tone_with_kappa(modulation: ModulationSpec, kappa: float) -> ModulationSpec:
    if not modulation.tones:
        raise ValueError("kappa sweeps need at least one modulation tone")
    tones = (dataclasses.replace(modulation.tones[0], kappa=float(kappa)),) + modulation.tones[1:]
    return ModulationSpec(modulation.l, modulation.omega0, tones)


def _gamma_profile(lattice: LatticeSpec) -> np.ndarray:
    return np.asarray(lattice.gammas, dtype=float)


def _zero_gamma_hopping(lattice: LatticeSpec, coupling) -> np.ndarray:
    quiet = LatticeSpec(
        lattice.n_sites, lattice.tunnelings, (0.0,) * lattice.n_sites, lattice.boundary
    )
    return build_effective_hamiltonian(quiet, coupling)


def run_spectrum(config: RunConfig) -> ScanOutput:
    coupling = effective_coupling_formula(config.modulation)
    h = build_effective_hamiltonian(config.lattice, coupling)
    result = eigenvalues_dense(h, tol_im=config.tol_im)
    rows = [(i, e.real, e.imag) for i, e in enumerate(result.eigenvalues)]
    return ScanOutput(rows)


def run_scan_kappa(config: RunConfig, threads: int = 1) -> ScanOutput:
    """Effective spectrum per kappa grid point, long format plus summary stream."""
    kappas = config.scan["kappa"].values()

    def one(kappa: float):
        coupling = effective_coupling_formula(_tone_with_kappa(config.modulation, kappa))
        h = build_effective_hamiltonian(config.lattice, coupling)
        return eigenvalues_dense(h, tol_im=config.tol_im)

    results = _map_ordered(one, kappas, threads)
    rows, summary = [], []
    for kappa, result in zip(kappas, results):
        for i, e in enumerate(result.eigenvalues):
            rows.append((float(kappa), i, e.real, e.imag))
        summary.append((float(kappa), result.max_abs_imag, result.is_real))
    return ScanOutput(rows, summary_rows=summary)


def run_phase_diagram(config: RunConfig, threads: int = 1) -> ScanOutput:
    """Reality grid over (kappa, gamma^2/T^2).

    The configured gammas act as the unit gain/loss profile; each cell
    scales it by gamma = sqrt(gamma_sq) * T_ref with T_ref the first
    tunneling.
    """
    kappas = config.scan["kappa"].values()
    gamma_sqs = config.scan["gamma_sq"].values()
    profile = _gamma_profile(config.lattice)
    t_ref = config.lattice.tunnelings[0]
    gamma_values = np.sqrt(gamma_sqs) * t_ref
    diag = np.diag(profile)

    def one_column(kappa: float):
        coupling = effective_coupling_formula(_tone_with_kappa(config.modulation, kappa))
        hop = _zero_gamma_hopping(config.lattice, coupling)
        stack = hop[None, :, :] + 1j * gamma_values[:, None, None] * diag[None, :, :]
        eigs = np.linalg.eigvals(stack)
        max_imag = np.abs(eigs.imag).max(axis=1)
        if config.tol_im is not None:
            tol = np.full(len(gamma_sqs), config.tol_im)
        else:
            tol = 1e-9 * np.maximum(1.0, np.abs(eigs).max(axis=1))
        return max_imag, max_imag < tol

    columns = _map_ordered(one_column, kappas, threads)
    max_imag = np.stack([c[0] for c in columns])
    is_real = np.stack([c[1] for c in columns])
    rows = []
    for i, kappa in enumerate(kappas):
        for j, gsq in enumerate(gamma_sqs):
            rows.append((float(kappa), float(gsq), float(max_imag[i, j]), bool(is_real[i, j])))
    diagram = PhaseDiagram(
        tuple(float(k) for k in kappas),
        tuple(float(g) for g in gamma_sqs),
        max_imag,
        is_real,
    )
    return ScanOutput(rows, phase_diagram=diagram)


def run_threshold(config: RunConfig) -> ScanOutput:
    """First breaking strength of the gamma-scaled family; echoes its inputs."""
    coupling = effective_coupling_formula(config.modulation)
    hop = _zero_gamma_hopping(config.lattice, coupling)
    diag = np.diag(_gamma_profile(config.lattice))

    def builder(gamma: float) -> np.ndarray:
        return hop + 1j * gamma * diag

    found = pt_threshold(builder, config.gamma_max, config.threshold_tol, tol_im=config.tol_im)
    tone = config.modulation.tones[0] if config.modulation.tones else None
    row = (
        config.lattice.n_sites,
        config.lattice.boundary,
        config.modulation.l,
        config.modulation.omega0,
        tone.kappa if tone else 0.0,
        tone.phi if tone else 0.0,
        config.gamma_max,
        config.threshold_tol,
        "unbroken" if found.unbroken else repr(float(found.gamma_star)),
    )
    return ScanOutput([row])


def run_propagate(config: RunConfig) -> ScanOutput:
    if config.initial_site is not None:
        psi0 = np.zeros(config.lattice.n_sites, dtype=complex)
        psi0[config.initial_site - 1] = 1.0
    else:
        psi0 = np.asarray(config.initial_amplitudes, dtype=complex)
    samples = propagate_samples(
        config.lattice, config.modulation, psi0, config.z_end, config.steps, config.stride
    )
    overflow = samples[-1].overflow
    rows = []
    last = len(samples) - 1
    for idx, state in enumerate(samples):
        if state.overflow:
            status = "overflow"
        elif idx == last:
            status = "final"
        else:
            status = "ok"
        power = state.power
        for site, amp in enumerate(state.amplitudes, start=1):
            rows.append((state.z, site, amp.real, amp.imag, power, status))
    return ScanOutput(rows, samples=samples, overflow=overflow)


def run_effective_coupling(config: RunConfig) -> ScanOutput:
    rows = []
    try:
        formula = effective_coupling_formula(config.modulation)
        rows.append(
            (
                "formula",
                formula.value.real,
                formula.value.imag,
                formula.magnitude,
                formula.peierls_phase,
                False,
            )
        )
    except ValueError:
        pass  # tone pattern without a wired closed form: numeric row only
    numeric = effective_coupling_numeric(
        config.modulation, config.window_periods, config.steps_per_period
    )
    rows.append(
        (
            "numeric",
            numeric.value.real,
            numeric.value.imag,
            numeric.magnitude,
            numeric.peierls_phase,
            numeric.accuracy_warning,
        )
    )
    return ScanOutput(rows)


def _map_ordered(func, values, threads: int):
    """Apply func over values, optionally with workers; results in input order."""
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(func, values))
    return [func(v) for v in values]


_RUNNERS = {
    "spectrum": lambda cfg, threads: run_spectrum(cfg),
    "scan_kappa": run_scan_kappa,
    "phase_diagram": run_phase_diagram,
    "threshold": lambda cfg, threads: run_threshold(cfg),
    "propagate": lambda cfg, threads: run_propagate(cfg),
    "effective_coupling": lambda cfg, threads: run_effective_coupling(cfg),
}


def summary_path(out_path: Path) -> Path:
    return out_path.with_name(out_path.stem + "_summary" + out_path.suffix)


def run_to_files(
    config: RunConfig, out_path, threads: int = 1, plot: bool = False
) -> tuple[list[Path], bool]:
    """Run the configured scenario and write its CSV stream(s).

    Returns the written paths and whether the run hit a numerical
    overflow (propagation leaving the representable range).
    """
    out_path = Path(out_path)
    output = _RUNNERS[config.scenario](config, threads)
    write_csv(out_path, HEADERS[config.scenario], output.rows)
    paths = [out_path]
    if output.summary_rows is not None:
        extra = summary_path(out_path)
        write_csv(extra, HEADERS["scan_kappa_summary"], output.summary_rows)
        paths.append(extra)
    if plot:
        from . import plots  # deferred so CSV runs never need a rendering backend

        paths.extend(plots.render_figures(config, output, out_path))
    return paths, output.overflow
