"""Pulsed projective-measurement scheme for a resonantly driven qubit.

Convention in this module: the drive makes the ground-state population
oscillate as cos^2(omega*t/2), so a full population swap takes half the
period pi/omega.  With n instantaneous probes evenly spaced over that half
period the per-probe survival is cos^2(pi/2n) and the closed-form laws
below follow.  The stochastic simulator realizes the same protocol run by
run, with optional readout imperfections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .rng import RngStream


@dataclass(frozen=True)
class ProbeImperfections:
    """Readout error model for a single probe.

    false_switch_prob: chance a ground-state qubit tunnels anyway (ends the
    run).  miss_prob: chance an excited-state qubit fails to tunnel; the
    missed detection leaves the qubit projected in the excited state and
    the run continues.
    """

    false_switch_prob: float = 0.0
    miss_prob: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.false_switch_prob < 1.0:
            raise ValueError("false_switch_prob must be in [0, 1)")
        if not 0.0 <= self.miss_prob < 1.0:
            raise ValueError("miss_prob must be in [0, 1)")


@dataclass(frozen=True)
class PulsedProtocol:
    """Drive plus probe schedule for one pulsed-measurement run.

    window defaults to the half period pi/omega.  probe_duration is
    informational only (it feeds the mean-excited-population feasibility
    estimate) and must be shorter than the probe spacing.
    """

    omega: float
    n_probes: int
    window: Optional[float] = None
    probe_duration: Optional[float] = None
    imperfections: Optional[ProbeImperfections] = None

    def __post_init__(self):
        if not self.omega >= 0.0 or not math.isfinite(self.omega):
            raise ValueError("omega must be finite and non-negative")
        if self.n_probes < 1:
            raise ValueError("n_probes must be >= 1")
        if self.window is None:
            if self.omega == 0.0:
                raise ValueError("window is required when omega = 0")
            object.__setattr__(self, "window", math.pi / self.omega)
        if not self.window > 0.0:
            raise ValueError("window must be positive")
        if self.probe_duration is not None and not (
            0.0 < self.probe_duration < self.probe_interval
        ):
            raise ValueError("probe_duration must lie in (0, window/n_probes)")

    @property
    def probe_interval(self) -> float:
        return self.window / self.n_probes


@dataclass(frozen=True)
class PulsedRunResult:
    """Outcome of one stochastic run.

    probes_completed counts probes that returned "no tunnel"; survived is
    equivalent to probes_completed == n_probes and to switch_index is None.
    """

    survived: bool
    probes_completed: int
    switch_index: Optional[int] = None


@dataclass(frozen=True)
class MeanExcitedPopulation:
    """Probe-averaged excited population, exact and small-angle forms."""

    exact: float
    small_angle: float
    omega_tau: float
    warning: Optional[str] = None


def survival_exact(n: int) -> float:
    """Survival probability [cos^2(pi/2n)]^n after n evenly spaced probes."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        # cos(pi/2) is only ~6e-17 in floating point; the single end-point
        # probe finds the excited state with certainty.
        return 0.0
    return math.cos(math.pi / (2 * n)) ** (2 * n)


def survival_approx(n: int) -> float:
    """Large-n exponential approximation exp(-pi^2/4n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.exp(-math.pi**2 / (4 * n))


def survival_vs_time(omega: float, dt: float, t: float, mode: str = "exact") -> float:
    """Survival of the ground state at probe boundary t = n*dt.

    "exact" evaluates the stepwise product cos^{2n}(omega*dt/2) and requires
    t to be commensurate with dt; "approx" evaluates the exponential
    envelope exp(-(omega^2*dt/4)*t) at any t >= 0.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if t < 0.0:
        raise ValueError("t must be non-negative")
    if mode == "approx":
        return math.exp(-(omega**2 * dt / 4.0) * t)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    ratio = t / dt
    n = round(ratio)
    if abs(ratio - n) > 1e-9:
        raise ValueError(f"t = {t} is not a multiple of dt = {dt}")
    return math.cos(omega * dt / 2.0) ** (2 * n)


def effective_decay_time(omega: float, dt: float) -> float:
    """Characteristic decay time t_c = 4/(omega^2 * dt) of the probed drive."""
    if omega <= 0.0 or dt <= 0.0:
        raise ValueError("omega and dt must be positive")
    return 4.0 / (omega**2 * dt)


def mean_excited_population(omega: float, tau: float) -> MeanExcitedPopulation:
    """Excited population averaged over a probe window of duration tau.

    Exact value (1/2)(1 - sin(omega*tau)/(omega*tau)) alongside the
    small-angle form omega^2*tau^2/12; a warning is attached when
    omega*tau >= 0.5 and the small-angle form is unreliable.
    """
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    if omega < 0.0:
        raise ValueError("omega must be non-negative")
    x = omega * tau
    if x == 0.0:
        exact = 0.0
    else:
        exact = 0.5 * (1.0 - math.sin(x) / x)
    small_angle = x**2 / 12.0
    warning = None
    if x >= 0.5:
        warning = f"omega*tau = {x:.4g} >= 0.5; small-angle form unreliable"
    return MeanExcitedPopulation(exact, small_angle, x, warning)


def simulate_pulsed_run(protocol: PulsedProtocol, rng: RngStream) -> PulsedRunResult:
    """One stochastic realization of the selective-measurement protocol.

    Starting from the ground state, the qubit evolves under the drive for
    one probe interval, then an instantaneous probe either finds it in the
    ground state (run continues from the ground state) or the junction
    switches and the run ends.  Imperfections: a ground outcome still
    switches with probability false_switch_prob; an excited outcome fails
    to switch with probability miss_prob, leaving the qubit in the excited
    state to keep evolving.
    """
    imp = protocol.imperfections or ProbeImperfections()
    half_angle = protocol.omega * protocol.probe_interval / 2.0
    # Excited-state probability at the probe, by basis state entering the
    # interval: sin^2 from |0>, cos^2 from |1>.
    p_exc_from0 = math.sin(half_angle) ** 2
    p_exc_from1 = math.cos(half_angle) ** 2

    in_ground = True
    for k in range(protocol.n_probes):
        p_exc = p_exc_from0 if in_ground else p_exc_from1
        excited = rng.uniform() < p_exc
        if excited:
            missed = imp.miss_prob > 0.0 and rng.uniform() < imp.miss_prob
            if not missed:
                return PulsedRunResult(False, probes_completed=k, switch_index=k)
            in_ground = False
        else:
            false_switch = (
                imp.false_switch_prob > 0.0 and rng.uniform() < imp.false_switch_prob
            )
            if false_switch:
                return PulsedRunResult(False, probes_completed=k, switch_index=k)
            in_ground = True
    return PulsedRunResult(True, probes_completed=protocol.n_probes)


def simulate_pulsed_ensemble(
    protocol: PulsedProtocol, runs: int, master_seed: int
) -> int:
    """Number of surviving runs out of `runs`; run i uses stream (seed, i)."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    survived = 0
    for i in range(runs):
        result = simulate_pulsed_run(protocol, RngStream(master_seed, i))
        survived += result.survived
    return survived
