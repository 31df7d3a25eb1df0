"""Matplotlib figures written next to the CSV outputs.

Only imported when a command is run with ``--figures``; uses the Agg backend
and strips the PNG software tag so repeated runs give identical files.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from scipy import stats as sps  # noqa: E402

from .dynamics import DOF_NAMES, DOF_UNITS, Trajectory  # noqa: E402
from .pointing import FitResult, PointingSeries  # noqa: E402

plt.rcParams.update(
    {
        "font.size": 9,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "lines.linewidth": 0.9,
        "figure.dpi": 100,
    }
)


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def pointing_figure(series: PointingSeries, fits: FitResult, path, title: str = "Pointing error") -> Path:
    """Lateral and angular time histories, scatter, and fitted PDFs."""
    fig, ax = plt.subplots(2, 3, figsize=(11, 6))
    t = series.t
    ax[0, 0].plot(t, series.lateral_x * 1e3)
    ax[0, 0].set(xlabel="t [s]", ylabel="X(t) [mm]")
    ax[0, 1].plot(t, series.lateral_y * 1e3, color="tab:orange")
    ax[0, 1].set(xlabel="t [s]", ylabel="Y(t) [mm]")
    ax[0, 2].plot(t, series.rho, color="tab:green")
    ax[0, 2].set(xlabel="t [s]", ylabel=r"$\rho(t)$ [mrad]")

    ax[1, 0].scatter(series.theta_x, series.theta_y, s=6, alpha=0.7)
    ax[1, 0].set(xlabel=r"$\theta_x$ [mrad]", ylabel=r"$\theta_y$ [mrad]")
    ax[1, 0].set_aspect("equal", adjustable="datalim")

    for a, data, g, label in (
        (ax[1, 1], series.theta_x, fits.gaussian_x, r"$\theta_x$"),
        (ax[1, 1], series.theta_y, fits.gaussian_y, r"$\theta_y$"),
    ):
        a.hist(data, bins=25, density=True, alpha=0.35, label=label)
        if g.std > 0:
            x = np.linspace(g.mean - 4 * g.std, g.mean + 4 * g.std, 200)
            a.plot(x, sps.norm.pdf(x, g.mean, g.std))
    ax[1, 1].set(xlabel="[mrad]", ylabel="PDF")
    ax[1, 1].legend()

    ax[1, 2].hist(series.rho, bins=25, density=True, alpha=0.35, color="tab:green")
    if fits.rayleigh_sigma > 0:
        r = np.linspace(0, max(series.rho.max(), 4 * fits.rayleigh_sigma), 200)
        ax[1, 2].plot(r, sps.rayleigh.pdf(r, scale=fits.rayleigh_sigma), color="k",
                      label=f"Rayleigh $\\sigma$={fits.rayleigh_sigma:.3g}")
        ax[1, 2].legend()
    ax[1, 2].set(xlabel=r"$|\theta|$ [mrad]", ylabel="PDF")
    fig.suptitle(title)
    return _save(fig, path)


def trajectory_figure(traj: Trajectory, path) -> Path:
    fig, axes = plt.subplots(3, 2, figsize=(10, 7), sharex=True)
    for i, a in enumerate(axes.T.ravel()):
        a.plot(traj.t, traj.q[:, i])
        a.set_ylabel(f"{DOF_NAMES[i]} [{DOF_UNITS[i]}]")
    for a in axes[-1]:
        a.set_xlabel("t [s]")
    return _save(fig, path)


def budget_figure(curve, path) -> Path:
    L = np.array([c[0] for c in curve])
    db = np.array([c[1] for c in curve])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx(L / 1e3, db)
    ax.set(xlabel="link range [km]", ylabel="geometric loss [dB]")
    return _save(fig, path)


def comparison_figure(measured: PointingSeries, predicted: PointingSeries | None, path) -> Path:
    fig, ax = plt.subplots(1, 2, figsize=(10, 4))
    ax[0].scatter(measured.theta_x, measured.theta_y, s=6, label="measured")
    ax[1].plot(measured.t, measured.rho, label="measured")
    if predicted is not None:
        ax[0].scatter(predicted.theta_x, predicted.theta_y, s=6, label="predicted")
        ax[1].plot(predicted.t, predicted.rho, label="predicted")
    ax[0].set(xlabel=r"$\theta_x$ [mrad]", ylabel=r"$\theta_y$ [mrad]")
    ax[1].set(xlabel="t [s]", ylabel=r"$\rho$ [mrad]")
    for a in ax:
        a.legend()
    return _save(fig, path)
