"""Acceptance suite: one test (and one printed pass/fail line) per criterion.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""

import math
import time

import numpy as np
import pytest

from zenosim import analysis, continuous, io, pulsed, qmath
from zenosim.cli import DEFAULT_SEED, main

OMEGA_PULSED = 2 * math.pi
OMEGA_CONTINUOUS = 2 * math.pi
WINDOW = math.pi / (2 * OMEGA_CONTINUOUS)


def report(number: int, label: str, check):
    try:
        check()
    except AssertionError:
        print(f"ACCEPTANCE {number} [{label}]: FAIL")
        raise
    print(f"ACCEPTANCE {number} [{label}]: PASS")


def test_criterion_1_probe_count_scan():
    def check():
        start = time.perf_counter()
        exact = [pulsed.survival_exact(n) for n in range(1, 101)]
        approx = [pulsed.survival_approx(n) for n in range(1, 101)]
        assert exact[0] == 0.0
        assert all(b > a for a, b in zip(exact, exact[1:]))
        for n in range(10, 101):
            assert abs(exact[n - 1] - approx[n - 1]) < 0.002
        assert time.perf_counter() - start < 1.0

    report(1, "survival vs probe count", check)


def test_criterion_2_time_decay_curves():
    def check():
        start = time.perf_counter()
        for divisor in (50, 100):
            dt = math.pi / (divisor * OMEGA_PULSED)
            for k in range(1, divisor * 2 + 1):  # boundaries up to t = pi/omega
                t = k * dt
                stepwise = pulsed.survival_vs_time(OMEGA_PULSED, dt, t, "exact")
                envelope = pulsed.survival_vs_time(OMEGA_PULSED, dt, t, "approx")
                assert abs(stepwise - envelope) / stepwise < 0.01
        dt50 = math.pi / (50 * OMEGA_PULSED)
        assert pulsed.effective_decay_time(OMEGA_PULSED, dt50) == pytest.approx(
            200.0 / (math.pi * OMEGA_PULSED), rel=1e-14
        )
        assert time.perf_counter() - start < 1.0

    report(2, "decay-time curves", check)


def test_criterion_3_trajectory_sweep_at_paper_scale():
    def check():
        start = time.perf_counter()
        grid = np.linspace(50.0, 500.0, 10)
        runs = 1000
        rows = continuous.sweep_gamma(
            OMEGA_CONTINUOUS, WINDOW, grid, runs, DEFAULT_SEED, threads=1
        )
        for row in rows:
            p = continuous.survival_probability(OMEGA_CONTINUOUS, row.gamma, WINDOW)
            oracle = abs(
                qmath.mat_exp(
                    continuous.hamiltonian(OMEGA_CONTINUOUS, row.gamma), WINDOW
                )[0, 0]
            ) ** 2
            assert p == pytest.approx(oracle, abs=1e-10)
            band = 3 * runs * math.sqrt(p * (1 - p) / runs)
            assert abs(row.no_jump_count - runs * p) <= band
        counts = [row.no_jump_count for row in rows]
        assert all(b >= a for a, b in zip(counts, counts[1:]))
        assert counts[-1] > 900  # approaching the total run count
        assert rows[0].analytic_count == pytest.approx(498.23, abs=0.01)
        assert rows[-1].analytic_count == pytest.approx(925.20, abs=0.01)
        assert time.perf_counter() - start < 60.0

    report(3, "MCWF sweep vs closed form", check)


def test_criterion_4_oracle_equivalence_and_coefficient():
    def check():
        from zenosim.cli import validation_report

        dev_series = 0.0
        dev_fine = 0.0
        for omega in (math.pi, 2 * math.pi, 4 * math.pi):
            for gamma in (0.0, 10.0, 50.0, 200.0, 500.0):
                h = continuous.hamiltonian(omega, gamma)
                for t in (0.0, 0.05, 0.25):
                    closed = continuous.propagator(omega, gamma, t)
                    dev_series = max(
                        dev_series, float(np.max(np.abs(closed - qmath.mat_exp(h, t))))
                    )
                    fine = qmath.propagator_by_integration(h, t, 10_000)
                    dev_fine = max(dev_fine, float(np.max(np.abs(closed - fine))))
        assert dev_series < 1e-8
        assert dev_fine < 1e-8

        report_doc = validation_report()
        coeff = report_doc["survival_coefficient"]
        assert coeff["shipped"] == "gamma/(4h)"
        assert coeff["rejected"] == "gamma/(2h)"
        assert coeff["max_dev_derived_vs_series"] < 1e-10
        assert coeff["max_dev_printed_vs_series"] > 1e-10

    report(4, "oracle equivalence and survival coefficient", check)


def test_criterion_5_schulman_equivalence():
    def check():
        omega_continuous = OMEGA_CONTINUOUS
        omega_pulsed = 2 * omega_continuous
        dt_max = 4.0 / (20.0 * omega_continuous)  # gamma = 20 * omega_continuous
        gaps = []
        for dt in np.geomspace(dt_max, dt_max / 100.0, 25):
            result = analysis.equivalence_check(omega_pulsed, float(dt))
            assert result.gamma_matched >= 20.0 * omega_continuous - 1e-9
            assert result.relative_gap < 0.05
            gaps.append(result.relative_gap)
        assert all(b < a for a, b in zip(gaps, gaps[1:]))

    report(5, "pulsed/continuous rate matching", check)


def test_criterion_6_statistics_and_determinism(tmp_path):
    def check():
        protocol = pulsed.PulsedProtocol(omega=OMEGA_PULSED, n_probes=10)
        runs = 100_000
        survived = pulsed.simulate_pulsed_ensemble(protocol, runs, DEFAULT_SEED)
        p = pulsed.survival_exact(10)
        assert abs(survived / runs - p) <= 3 * math.sqrt(p * (1 - p) / runs)

        outputs = []
        for threads in (1, 2, 8):
            out = tmp_path / f"fig4_t{threads}.csv"
            code = main(
                ["fig4", "--seed", str(DEFAULT_SEED), "--threads", str(threads),
                 "--output", str(out), "--no-plot"]
            )
            assert code == 0
            outputs.append(io.strip_timestamp(out.read_text()))
        assert outputs[0] == outputs[1] == outputs[2]

    report(6, "ensemble statistics and thread determinism", check)
