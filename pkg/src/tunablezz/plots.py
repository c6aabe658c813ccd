"""Matplotlib rendering for the report recipes (PNG files, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

DPI = 130


def _new_figure(nrows=1, ncols=1, height=2.8, width=6.0):
    fig = Figure(figsize=(width, height * nrows), dpi=DPI)
    FigureCanvasAgg(fig)
    axes = fig.subplots(nrows, ncols, squeeze=False)
    return fig, axes


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    return path


def render_zeta_panels(path, panels) -> Path:
    """Stacked zeta-vs-detuning panels.

    `panels`: list of dicts with keys title, detuning_ghz, zeta_exact_mhz,
    zeta_pert_mhz, roots_ghz.
    """
    fig, axes = _new_figure(nrows=len(panels))
    for ax, panel in zip(axes[:, 0], panels):
        x = np.asarray(panel["detuning_ghz"])
        ax.plot(x, panel["zeta_exact_mhz"], "-", color="crimson", label="diagonalization")
        ax.plot(x, panel["zeta_pert_mhz"], "--", color="royalblue", label="4th-order")
        ax.axhline(0.0, color="0.6", lw=0.8)
        for root in panel.get("roots_ghz", ()):
            ax.axvline(root, color="0.8", lw=0.8, ls=":")
            ax.plot([root], [0.0], "o", color="k", ms=4)
        ax.set_title(panel["title"], fontsize=9)
        ax.set_xlabel(panel.get("xlabel", "coupler detuning (GHz)"), fontsize=8)
        ax.set_ylabel(r"$\zeta/2\pi$ (MHz)", fontsize=8)
        if "ylim" in panel:
            ax.set_ylim(*panel["ylim"])
        ax.tick_params(labelsize=8)
        ax.legend(fontsize=7, loc="best")
    return _save(fig, path)


def render_config_grid(path, panels) -> Path:
    """2x2 grid of zeta curves for the interference benchmark configs."""
    fig, axes = _new_figure(nrows=2, ncols=2, height=2.6, width=7.5)
    for ax, panel in zip(axes.ravel(), panels):
        x = np.asarray(panel["detuning_ghz"])
        ax.plot(x, panel["zeta_exact_mhz"], "-", color="crimson", lw=1.2, label="diag")
        ax.plot(x, panel["zeta_pert_mhz"], "--", color="royalblue", lw=1.2, label="4th order")
        ax.axhline(0.0, color="0.6", lw=0.8)
        ax.set_title(panel["title"], fontsize=8)
        ax.set_xlabel(r"$(\omega_- - \omega_2)/2\pi$ (GHz)", fontsize=8)
        ax.set_ylabel(r"$\zeta/2\pi$ (MHz)", fontsize=8)
        if "ylim" in panel:
            ax.set_ylim(*panel["ylim"])
        ax.tick_params(labelsize=7)
        ax.legend(fontsize=7)
    return _save(fig, path)


def render_rb_decay(path, curves) -> Path:
    """Benchmarking decay curves with their exponential fits.

    `curves`: list of dicts with keys label, lengths, means (per qubit
    dict), fits (per qubit (A, p, B)).
    """
    fig, axes = _new_figure(nrows=1, ncols=len(curves), height=3.0, width=4.0 * len(curves))
    for ax, curve in zip(axes.ravel(), curves):
        m = np.asarray(curve["lengths"], dtype=float)
        grid = np.linspace(m.min(), m.max(), 200)
        for (qubit, means), color in zip(curve["means"].items(), ("tab:blue", "tab:green")):
            ax.plot(m, means, "o", ms=4, color=color, label=qubit)
            a, p, b = curve["fits"][qubit]
            ax.plot(grid, a * p**grid + b, "-", lw=1.0, color=color)
        ax.set_title(curve["label"], fontsize=9)
        ax.set_xlabel("sequence length (Cliffords)", fontsize=8)
        ax.set_ylabel("ground-state population", fontsize=8)
        ax.set_xscale("log", base=2)
        ax.tick_params(labelsize=8)
        ax.legend(fontsize=7)
    return _save(fig, path)


def render_thermal_curves(path, temps_mk, panels) -> Path:
    """Gate fidelity versus coupler temperature, one panel per device."""
    fig, axes = _new_figure(nrows=1, ncols=len(panels), height=3.0, width=4.0 * len(panels))
    for ax, panel in zip(axes.ravel(), panels):
        ax.plot(temps_mk, panel["fidelity"], "-o", ms=3, color="tab:red",
                label="device coherence")
        ax.plot(temps_mk, panel["fidelity_equal"], "--", color="0.4",
                label="decoherence-free")
        ax.set_title(panel["title"], fontsize=9)
        ax.set_xlabel("coupler temperature (mK)", fontsize=8)
        ax.set_ylabel("half-swap fidelity", fontsize=8)
        ax.tick_params(labelsize=8)
        ax.legend(fontsize=7)
    return _save(fig, path)
