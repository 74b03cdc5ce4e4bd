"""Figure rendering for the CLI report path.

Each scenario with a natural picture gets one PNG next to its CSV:
kappa scans plot the imaginary spectrum, phase diagrams the reality
region, propagation runs the power trace and site intensities, and
single spectra the eigenvalues in the complex plane.  CSV stays the
canonical, deterministic output; figures are an opt-in convenience.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .config import RunConfig

DPI = 150


def _figure_path(out_path: Path, suffix: str = "") -> Path:
    return out_path.with_name(out_path.stem + suffix + ".png")


def _plot_scan_kappa(config, output, path: Path) -> None:
    rows = np.asarray([(r[0], r[3]) for r in output.rows])
    summary = output.summary_rows
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(rows[:, 0], rows[:, 1], ".", ms=2.5, color="#B03030")
    real_kappas = [r[0] for r in summary if r[2]]
    if real_kappas:
        ax.axvspan(min(real_kappas), max(real_kappas), color="#88BB88", alpha=0.25,
                   label="real spectrum")
        ax.legend(frameon=False)
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel(r"Im $E$")
    ax.set_title(f"N={config.lattice.n_sites}, l={config.modulation.l}")
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)


def _plot_phase_diagram(config, output, path: Path) -> None:
    diagram = output.phase_diagram
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    kappa = np.asarray(diagram.kappa_axis)
    gsq = np.asarray(diagram.gamma_sq_axis)
    mesh = ax.pcolormesh(
        kappa, gsq, (~diagram.is_real.T).astype(float), cmap="Greys", shading="nearest"
    )
    mesh.set_clim(0.0, 1.3)
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel(r"$\gamma^2/T^2$")
    ax.set_title("shaded: complex spectrum")
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)


def _plot_propagate(config, output, path: Path) -> None:
    samples = output.samples
    zs = np.asarray([s.z for s in samples])
    powers = np.asarray([s.power for s in samples])
    intensity = np.abs(np.stack([s.amplitudes for s in samples])) ** 2
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax0.semilogy(zs, powers, color="#2040A0")
    ax0.set_xlabel(r"$z$")
    ax0.set_ylabel(r"$P(z)$")
    extent = (1, config.lattice.n_sites, zs[-1], zs[0])
    im = ax1.imshow(intensity, aspect="auto", extent=extent, cmap="magma")
    ax1.set_xlabel("site")
    ax1.set_ylabel(r"$z$")
    fig.colorbar(im, ax=ax1, label=r"$|\psi_n|^2$")
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)


def _plot_spectrum(config, output, path: Path) -> None:
    eigs = np.asarray([complex(r[1], r[2]) for r in output.rows])
    fig, ax = plt.subplots(figsize=(4.5, 4.0))
    ax.axhline(0.0, color="0.8", lw=0.8)
    ax.plot(eigs.real, eigs.imag, "o", color="#B03030")
    ax.set_xlabel(r"Re $E$")
    ax.set_ylabel(r"Im $E$")
    fig.savefig(path, dpi=DPI, bbox_inches="tight")
    plt.close(fig)


_PLOTTERS = {
    "scan_kappa": _plot_scan_kappa,
    "phase_diagram": _plot_phase_diagram,
    "propagate": _plot_propagate,
    "spectrum": _plot_spectrum,
}


def render_figures(config: RunConfig, output, out_path) -> list[Path]:
    """Render the scenario's figure(s) beside the CSV; returns written paths."""
    plotter = _PLOTTERS.get(config.scenario)
    if plotter is None:
        return []
    path = _figure_path(Path(out_path))
    plotter(config, output, path)
    return [path]
