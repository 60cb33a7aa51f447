import math

import numpy as np
import pytest

from zenosim import qmath
from zenosim.continuous import hamiltonian

OMEGAS = [math.pi, 2 * math.pi, 4 * math.pi]
GAMMAS = [0.0, 10.0, 50.0, 200.0, 500.0]
TIMES = [0.0, 0.05, 0.25]


def test_mat_exp_zero_matrix_is_identity():
    u = qmath.mat_exp(np.zeros((2, 2)), 3.7)
    assert np.allclose(u, np.eye(2), atol=1e-15)


def test_mat_exp_full_rabi_swap():
    # Hermitian drive for a quarter of the population period empties |0>.
    omega = 2 * math.pi
    m = np.array([[0.0, omega], [omega, 0.0]], dtype=complex)
    u = qmath.mat_exp(m, math.pi / (2 * omega))
    assert abs(u[0, 0]) < 1e-12
    assert abs(abs(u[1, 0]) - 1.0) < 1e-12


def test_mat_exp_dissipative_survival_matches_fine_step():
    # Frozen expected value confirmed by the independent RK4 integrator.
    m = hamiltonian(2 * math.pi, 50.0)
    u = qmath.mat_exp(m, 0.25)
    survival = abs(u[0, 0]) ** 2
    assert survival == pytest.approx(0.4982295742694505, abs=1e-10)
    psi = qmath.fine_step_integrate(m, qmath.KET0, 0.25, 100_000)
    assert abs(psi[0]) ** 2 == pytest.approx(survival, abs=1e-10)


def test_fine_step_zero_generator_keeps_state():
    psi = qmath.fine_step_integrate(np.zeros((2, 2)), qmath.KET0, 1.0, 1000)
    assert np.allclose(psi, qmath.KET0, atol=1e-15)


def test_fine_step_unitary_quarter_period_superposition():
    omega = 2 * math.pi
    m = np.array([[0.0, omega], [omega, 0.0]], dtype=complex)
    psi = qmath.fine_step_integrate(m, qmath.KET0, math.pi / (4 * omega), 5000)
    assert qmath.state_norm(psi) == pytest.approx(1.0, abs=1e-10)
    assert abs(psi[0]) == pytest.approx(abs(psi[1]), abs=1e-10)


def test_fine_step_matches_mat_exp_strong_damping():
    m = hamiltonian(2 * math.pi, 500.0)
    psi = qmath.fine_step_integrate(m, qmath.KET0, 0.25, 100_000)
    expected = qmath.mat_exp(m, 0.25) @ qmath.KET0
    assert np.max(np.abs(psi - expected)) < 1e-8


@pytest.mark.parametrize("omega", OMEGAS)
def test_unitarity_without_damping(omega):
    u = qmath.mat_exp(hamiltonian(omega, 0.0), 0.25)
    assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-10


@pytest.mark.parametrize("omega", OMEGAS)
@pytest.mark.parametrize("gamma", GAMMAS)
def test_composition_property(omega, gamma):
    m = hamiltonian(omega, gamma)
    t1, t2 = 0.07, 0.11
    u12 = qmath.mat_exp(m, t1 + t2)
    assert np.max(np.abs(u12 - qmath.mat_exp(m, t2) @ qmath.mat_exp(m, t1))) < 1e-10


@pytest.mark.parametrize("gamma", GAMMAS)
def test_determinant_tracks_trace_of_antihermitian_part(gamma):
    u = qmath.mat_exp(hamiltonian(2 * math.pi, gamma), 0.25)
    assert abs(abs(np.linalg.det(u)) - math.exp(-gamma * 0.25 / 2)) < 1e-10


def test_norm_non_increasing_in_time():
    m = hamiltonian(2 * math.pi, 50.0)
    norms = [
        qmath.state_norm(qmath.mat_exp(m, t) @ qmath.KET0)
        for t in np.linspace(0.0, 0.5, 60)
    ]
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_invalid_inputs_rejected():
    with pytest.raises(ValueError):
        qmath.mat_exp(np.array([[np.nan, 0], [0, 0]]), 1.0)
    with pytest.raises(ValueError):
        qmath.mat_exp(np.zeros((2, 2)), -1.0)
    with pytest.raises(ValueError):
        qmath.fine_step_integrate(np.zeros((2, 2)), qmath.KET0, 1.0, 0)
    with pytest.raises(ValueError):
        qmath.mat_exp(np.zeros((3, 3)), 1.0)


def test_angular_frequency_conversion():
    assert qmath.angular_frequency(1.0) == pytest.approx(2 * math.pi)
