"""Figure rendering for the report paths.

Each CLI command can render a matplotlib figure next to its delimited
output.  The figures are diagnostic companions to the data files, not
publication graphics: readable axes, log scales where the physics spans
decades, one file per command.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .estimators import KINDS


def plot_rates(rows: dict[str, np.ndarray], path: str) -> None:
    """Relaxation and dephasing channels versus temperature."""
    t_mk = rows["T_mK"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax1.semilogy(t_mk, rows["tau1_qp_us"], "k--", label="quasiparticle only")
    ax1.semilogy(t_mk, rows["tau1_total_us"], "r-", label="total")
    ax1.set_xlabel("T (mK)")
    ax1.set_ylabel(r"$\tau_1$ ($\mu$s)")
    ax1.legend(frameon=False)
    ax2.semilogy(t_mk, rows["gamma_phi_tunneling"], "b-", label="qp tunneling")
    ax2.semilogy(t_mk, rows["gamma_phi_andreev"], "g-", label="Andreev states")
    ax2.set_xlabel("T (mK)")
    ax2.set_ylabel(r"$\gamma_\varphi$ (rad/s)")
    ax2.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sweep(rows: dict[str, np.ndarray], path: str) -> None:
    """Nine extracted temperatures against the set temperature."""
    t_set = rows["T_set_mK"]
    fig, ax = plt.subplots(figsize=(4.8, 4.2))
    span = [min(t_set), max(t_set)]
    ax.plot(span, span, "k--", lw=1, label="one-to-one")
    for key in KINDS:
        ax.plot(t_set, rows[f"T_{key}_mK"], ".-", ms=4, lw=0.8, label=key)
    ax.set_xlabel(r"$T_{\rm set}$ (mK)")
    ax.set_ylabel(r"$T_{\rm eff}$ (mK)")
    ax.legend(frameon=False, fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_fisher(rows: dict[str, np.ndarray], path: str) -> None:
    """Cramer-Rao relative-error floors versus temperature."""
    t_mk = rows["T_mK"]
    fig, ax = plt.subplots(figsize=(4.8, 3.6))
    ax.semilogy(t_mk, rows["rel_error_2lvl"], "r--", label="two-level")
    ax.semilogy(t_mk, rows["rel_error_3lvl"], "-", color="darkred", label="three-level")
    ax.semilogy(t_mk, rows["rel_error_N10"], "r:", label="N = 10")
    ax.set_xlabel("T (mK)")
    ax.set_ylabel(r"$|\Delta T/\langle T\rangle|$")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_fit(points: dict[str, np.ndarray], fits, path: str) -> None:
    """The two thermalization fits with their data points."""
    fit_gamma, fit_mixing = fits
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    x1 = points["n_eff"]
    ax1.plot(x1, points["gamma1"] / (2 * np.pi * 1e6), "bo", ms=4)
    grid = np.linspace(min(x1), max(x1), 50)
    ax1.plot(grid, (fit_gamma.slope * grid + fit_gamma.offset) / (2 * np.pi * 1e6),
             "b-", lw=1,
             label=f"k/b = {fit_gamma.slope / fit_gamma.offset:.2f}")
    ax1.set_xlabel(r"$n(\omega_{ge}, T_{\rm eff})$")
    ax1.set_ylabel(r"$\gamma_1/2\pi$ (MHz)")
    ax1.legend(frameon=False)
    x2 = points["n_set"]
    ax2.plot(x2, x1, "go", ms=4)
    grid = np.linspace(min(x2), max(x2), 50)
    ax2.plot(grid, grid, "k--", lw=1, label="one-to-one")
    ax2.plot(grid, fit_mixing.slope * grid + fit_mixing.offset, "g-", lw=1,
             label=f"k = {fit_mixing.slope:.2f}, b = {fit_mixing.offset:.3f}")
    ax2.set_xlabel(r"$n(\omega_{ge}, T_{\rm set})$")
    ax2.set_ylabel(r"$n(\omega_{ge}, T_{\rm eff})$")
    ax2.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
