"""Matplotlib renderings of the experiment outputs, saved next to the data."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_probe_count_scan(rows, path) -> None:
    """Survival vs number of probes: exact product law and exponential form."""
    n = [r[0] for r in rows]
    exact = [r[1] for r in rows]
    approx = [r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(n, approx, "-", color="tab:blue", label=r"$\exp(-\pi^2/4n)$")
    ax.plot(n, exact, "o", ms=3, color="tab:red", label=r"$[\cos^2(\pi/2n)]^n$")
    ax.set_xlabel("number of probes $n$")
    ax.set_ylabel(r"survival probability of $|0\rangle$")
    ax.legend()
    _save(fig, path)


def plot_time_decay(times, rabi, per_dt, path) -> None:
    """Survival vs time for each probe spacing, over the undamped oscillation.

    per_dt maps a label to (stepwise, envelope) sample arrays on `times`.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(times, rabi, "-", color="tab:blue", lw=1, label="undamped Rabi")
    for label, (stepwise, envelope) in per_dt.items():
        (line,) = ax.plot(times, stepwise, "-", label=f"stepwise, {label}")
        ax.plot(
            times, envelope, "o", ms=3, mfc="none", color=line.get_color(),
            label=f"envelope, {label}",
        )
    ax.set_xlabel(r"time ($\mu$s)")
    ax.set_ylabel(r"survival probability of $|0\rangle$")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_gamma_sweep(rows, runs, path) -> None:
    """No-jump counts vs tunneling rate with Wilson error bars and theory."""
    gamma = np.array([r[0] for r in rows])
    counts = np.array([r[1] for r in rows], dtype=float)
    ci_low = np.array([r[2] for r in rows])
    ci_high = np.array([r[3] for r in rows])
    analytic = np.array([r[4] for r in rows])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(
        gamma, counts, yerr=[counts - ci_low, ci_high - counts],
        fmt="o", mfc="none", color="tab:blue", label="MCWF simulation",
    )
    ax.plot(gamma, analytic, "-", color="tab:red", label="closed form")
    ax.set_xlabel(r"tunneling rate $\Gamma$ (1/$\mu$s)")
    ax.set_ylabel(f"no-tunneling counts (of {runs})")
    ax.legend()
    _save(fig, path)


def plot_equivalence(rows, path) -> None:
    """Pulsed vs continuous effective decay rates across the dt grid."""
    dt = np.array([r[0] for r in rows])
    rate_p = np.array([r[2] for r in rows])
    rate_c = np.array([r[3] for r in rows])
    gap = np.array([r[4] for r in rows])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.loglog(dt, rate_p, "o", mfc="none", label="pulsed $\\Omega^2\\delta t/4$")
    ax1.loglog(dt, rate_c, "-", label="continuous $2(\\Gamma/4 - h)$")
    ax1.set_xlabel(r"probe interval $\delta t$ ($\mu$s)")
    ax1.set_ylabel(r"effective decay rate (1/$\mu$s)")
    ax1.legend(fontsize=8)
    ax2.loglog(dt, gap, "s-", color="tab:green")
    ax2.set_xlabel(r"probe interval $\delta t$ ($\mu$s)")
    ax2.set_ylabel("relative rate gap")
    _save(fig, path)
