"""Quantum Zeno effect simulator for a driven phase qubit.

Two measurement schemes: pulsed projective probes (closed-form survival
laws plus a stochastic per-probe simulator) and continuous tunneling
measurement (non-Hermitian closed forms plus a Monte Carlo wave-function
trajectory engine), cross-validated against independent matrix-exponential
and fine-step integration oracles.
"""

__version__ = "0.1.0"

from .analysis import (
    DecayRateEstimate,
    EquivalenceResult,
    binomial_ci,
    continuous_decay_rate,
    equivalence_check,
    fit_decay_rate,
)
from .continuous import (
    ContinuousParams,
    GammaSweepRow,
    SurvivalAmplitude,
    TrajectoryOutcome,
    hamiltonian,
    mcwf_step,
    propagator,
    run_ensemble,
    run_trajectory,
    survival_amplitude,
    survival_probability,
    sweep_gamma,
)
from .pulsed import (
    MeanExcitedPopulation,
    ProbeImperfections,
    PulsedProtocol,
    PulsedRunResult,
    effective_decay_time,
    mean_excited_population,
    simulate_pulsed_ensemble,
    simulate_pulsed_run,
    survival_approx,
    survival_exact,
    survival_vs_time,
)
from .qmath import angular_frequency, fine_step_integrate, mat_exp
from .rng import RngStream
