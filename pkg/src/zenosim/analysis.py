"""Cross-scheme analysis: decay rates, pulsed/continuous equivalence, statistics.

The pulsed and continuous modules use different drive conventions (ground
population period 2*pi/omega vs pi/omega).  The bridge omega_pulsed =
2*omega_continuous is applied exactly once, inside ``equivalence_check``,
and nowhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np


@dataclass(frozen=True)
class DecayRateEstimate:
    """Exponential decay rate extracted by a log-linear least-squares fit."""

    rate: float
    fit_window: tuple[float, float]
    residual: float


@dataclass(frozen=True)
class EquivalenceResult:
    """Pulsed vs continuous effective decay rates at the matched gamma = 4/dt.

    omega convention: rates are computed with omega_continuous =
    omega_pulsed / 2, the unique bridge under which the matching holds.
    """

    gamma_matched: float
    rate_pulsed: float
    rate_continuous: float
    relative_gap: float


def continuous_decay_rate(omega: float, gamma: float) -> float:
    """Asymptotic decay rate 2*(gamma/4 - h) of the survival probability.

    Valid on the overdamped branch gamma/4 > omega; approaches
    4*omega^2/gamma for gamma >> omega (the Zeno freeze-out).
    """
    if omega <= 0.0 or gamma < 0.0:
        raise ValueError("omega must be positive and gamma non-negative")
    disc = (gamma / 4.0) ** 2 - omega**2
    if disc <= 0.0:
        raise ValueError(
            f"gamma/4 = {gamma / 4.0:.4g} must exceed omega = {omega:.4g} "
            "(overdamped branch required)"
        )
    return 2.0 * (gamma / 4.0 - math.sqrt(disc))


def fit_decay_rate(times, probabilities, fit_window=None) -> DecayRateEstimate:
    """Single-exponential rate from a log-linear fit of (t, p) samples."""
    times = np.asarray(times, dtype=float)
    probs = np.asarray(probabilities, dtype=float)
    if times.shape != probs.shape or times.ndim != 1 or len(times) < 2:
        raise ValueError("times and probabilities must be equal-length 1-d arrays")
    if np.any(probs <= 0.0):
        raise ValueError("probabilities must be positive for a log-linear fit")
    if fit_window is not None:
        lo, hi = fit_window
        mask = (times >= lo) & (times <= hi)
        if mask.sum() < 2:
            raise ValueError("fit window contains fewer than two samples")
        times, probs = times[mask], probs[mask]
    else:
        fit_window = (float(times.min()), float(times.max()))
    slope, intercept = np.polyfit(times, np.log(probs), 1)
    resid = np.log(probs) - (slope * times + intercept)
    return DecayRateEstimate(
        rate=float(-slope),
        fit_window=(float(fit_window[0]), float(fit_window[1])),
        residual=float(np.sqrt(np.mean(resid**2))),
    )


def equivalence_check(omega_pulsed: float, dt: float) -> EquivalenceResult:
    """Compare the pulsed and continuous effective decay rates at gamma = 4/dt."""
    if omega_pulsed <= 0.0 or dt <= 0.0:
        raise ValueError("omega_pulsed and dt must be positive")
    gamma = 4.0 / dt
    omega_continuous = omega_pulsed / 2.0
    if gamma / 4.0 <= omega_continuous:
        raise ValueError(
            f"matched gamma = {gamma:.4g} is not overdamped for "
            f"omega_continuous = {omega_continuous:.4g}; decrease dt"
        )
    rate_pulsed = omega_pulsed**2 * dt / 4.0
    rate_continuous = continuous_decay_rate(omega_continuous, gamma)
    gap = abs(rate_pulsed - rate_continuous) / rate_continuous
    return EquivalenceResult(
        gamma_matched=gamma,
        rate_pulsed=rate_pulsed,
        rate_continuous=rate_continuous,
        relative_gap=gap,
    )


def binomial_ci(
    successes: int, trials: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    z = NormalDist().inv_cdf(0.5 * (1.0 + confidence))
    p_hat = successes / trials
    denom = 1.0 + z**2 / trials
    center = (p_hat + z**2 / (2 * trials)) / denom
    margin = (z / denom) * math.sqrt(
        p_hat * (1.0 - p_hat) / trials + z**2 / (4.0 * trials**2)
    )
    # Clamp to [0, 1] and, against float rounding, keep p_hat bracketed.
    low = max(0.0, min(center - margin, p_hat))
    high = min(1.0, max(center + margin, p_hat))
    return low, high
