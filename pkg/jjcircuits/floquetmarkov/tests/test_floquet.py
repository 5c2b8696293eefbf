"""
Test module for the Floquet propagation, modes and Fourier elements
"""

from functools import partial

import attr
import numpy as np
import pytest

from jjcircuits.floquetmarkov import dissipator, floquet
from jjcircuits.floquetmarkov.circuits import PeriodicHamiltonian
from jjcircuits.floquetmarkov.errors import (
    AliasingError,
    ConfigurationError,
    PreconditionError,
)

TWO_PI = 2 * np.pi
OMEGA_P = TWO_PI * 1.0
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


def sin_drive(omega, t):
    return np.sin(omega * t)


def cos_drive(omega, t):
    return np.cos(omega * t)


@pytest.fixture
def static_hamiltonian():
    return PeriodicHamiltonian(
        np.diag([0.0, 0.3, 0.7]) * TWO_PI, (), OMEGA_P)


@pytest.fixture
def driven_qubit():
    static = np.diag([0.0, 0.3]) * TWO_PI
    drives = ((0.2 * TWO_PI * SIGMA_X, partial(cos_drive, OMEGA_P)),)
    return PeriodicHamiltonian(static, drives, OMEGA_P)


@pytest.fixture
def options():
    return floquet.PropagatorOptions(steps_per_period=256)


def test_propagator_options_are_validated():
    """test case for step count, method and tolerance checks"""
    with pytest.raises(ConfigurationError):
        floquet.PropagatorOptions(steps_per_period=16)
    with pytest.raises(ConfigurationError):
        floquet.PropagatorOptions(method="rk4")
    with pytest.raises(ConfigurationError):
        floquet.PropagatorOptions(unitarity_tol=1e-3)


def test_fold_quasi_energy():
    """test case for folding into the first zone"""
    folded = floquet.fold_quasi_energy(np.array([0.0, 0.6, 1.4, -0.5]) * np.pi,
                                       OMEGA_P)
    np.testing.assert_allclose(folded, np.array([0.0, 0.6, -0.6, -0.5])
                               * np.pi, atol=1e-12)


def test_static_limit_equals_eigendecomposition(static_hamiltonian, options):
    """test case for quasi-energies of a time-independent Hamiltonian"""
    basis = floquet.solve_floquet(static_hamiltonian, 1.0, 64, options)
    expected = np.sort(floquet.fold_quasi_energy(
        np.array([0.0, 0.3, 0.7]) * TWO_PI, OMEGA_P))
    np.testing.assert_allclose(basis.quasi_energies, expected,
                               atol=1e-8 * OMEGA_P)
    assert not basis.degeneracy_flag
    assert basis.n_samples == 64


def test_degenerate_quasi_energies_are_flagged(options):
    """test case for levels one pump quantum apart"""
    H = PeriodicHamiltonian(np.diag([0.0, 1.0, 0.25]) * TWO_PI, (), OMEGA_P)
    basis = floquet.solve_floquet(H, 1.0, 64, options)
    assert basis.degeneracy_flag


def test_monodromy_is_unitary(driven_qubit, options):
    """test case for the one-period propagator"""
    U = floquet.propagate_period(driven_qubit, 1.0, options)
    assert np.max(np.abs(U.conj().T @ U - np.eye(2))) < 1e-9
    assert floquet.period_convergence(driven_qubit, 1.0, options) < 1e-3


def test_magnus_and_midpoint_agree(driven_qubit, options):
    """test case for the two fixed-step unitary schemes"""
    midpoint = floquet.solve_floquet(driven_qubit, 1.0, 64, options)
    magnus = floquet.solve_floquet(
        driven_qubit, 1.0, 64, attr.evolve(options, method=floquet.MAGNUS4))
    np.testing.assert_allclose(midpoint.quasi_energies, magnus.quasi_energies,
                               atol=1e-4 * OMEGA_P)


def test_modes_are_periodic_and_orthonormal(driven_qubit, options):
    """test case for the propagated modes on the strobe grid"""
    basis = floquet.solve_floquet(driven_qubit, 1.0, 64, options)
    assert basis.periodicity_residual < 1e-7
    for modes in basis.strobe_modes[::16]:
        np.testing.assert_allclose(modes.conj().T @ modes, np.eye(2),
                                   atol=1e-8)


def test_strobe_grid_needs_power_of_two(driven_qubit, options):
    """test case for the n_samples precondition"""
    basis = floquet.floquet_modes(
        floquet.propagate_period(driven_qubit, 1.0, options), 1.0)
    with pytest.raises(PreconditionError):
        floquet.propagate_modes(basis, driven_qubit, 48, options)
    with pytest.raises(PreconditionError):
        floquet.fourier_elements(basis, SIGMA_X, 5)


def test_fourier_elements_symmetry_and_aliasing(driven_qubit, options):
    """test case for P_ba,-k = conj(P_ab,k) and the sideband limit"""
    basis = floquet.solve_floquet(driven_qubit, 1.0, 64, options)
    F = floquet.fourier_elements(basis, SIGMA_X, 10)
    assert F.P.shape == (21, 2, 2)
    assert F.K == 10
    np.testing.assert_allclose(F.P[::-1].transpose(0, 2, 1), np.conj(F.P),
                               atol=1e-8)
    assert F.element(0, 1, 3) == F.P[13, 0, 1]
    with pytest.raises(AliasingError):
        floquet.fourier_elements(basis, SIGMA_X, 32)


def test_static_fourier_elements_sit_on_one_sideband(options):
    """test case for the static limit: matrix elements of the coupling"""
    H = PeriodicHamiltonian(np.diag([0.0, 0.3]) * TWO_PI, (), OMEGA_P)
    basis = floquet.solve_floquet(H, 1.0, 64, options)
    F = floquet.fourier_elements(basis, SIGMA_X, 5)
    assert abs(F.element(0, 1, 0)) == pytest.approx(1.0)
    assert F.tail_fraction < 1e-12


def test_match_modes_recovers_permutation():
    """test case for branch tracking by overlaps"""
    previous = np.eye(3)
    current = previous[:, [2, 0, 1]]
    order, overlaps = floquet.match_modes(previous, current)
    np.testing.assert_array_equal(order, [1, 2, 0])
    np.testing.assert_allclose(overlaps, 1.0)
    np.testing.assert_allclose(current[:, order], previous)


def test_circularly_driven_qubit_matches_rotating_frame():
    """test case for quasi-energies of an exactly solvable drive"""
    omega_e, rabi = TWO_PI * 1.1, TWO_PI * 0.2
    drives = (
        (0.5 * rabi * SIGMA_X, partial(cos_drive, OMEGA_P)),
        (-0.5 * rabi * SIGMA_Y, partial(sin_drive, OMEGA_P)),
    )
    H = PeriodicHamiltonian(np.diag([0.0, omega_e]), drives, OMEGA_P)
    basis = floquet.floquet_modes(
        floquet.propagate_period(
            H, 1.0, floquet.PropagatorOptions(steps_per_period=1024)),
        1.0)
    detuning = omega_e - OMEGA_P
    split = 0.5 * np.hypot(detuning, rabi)
    expected = np.sort(floquet.fold_quasi_energy(
        0.5 * detuning + np.array([-split, split]), OMEGA_P))
    np.testing.assert_allclose(basis.quasi_energies, expected,
                               atol=1e-4 * OMEGA_P)


def test_quasi_energies_do_not_depend_on_time_origin(driven_qubit):
    """test case for the spectrum of a drive shifted in time"""
    opts = floquet.PropagatorOptions(steps_per_period=1024)
    original = floquet.floquet_modes(
        floquet.propagate_period(driven_qubit, 1.0, opts), 1.0)
    shifted = floquet.floquet_modes(
        floquet.propagate_period(driven_qubit.shifted(0.3), 1.0, opts), 1.0)
    np.testing.assert_allclose(shifted.quasi_energies,
                               original.quasi_energies, atol=1e-5 * OMEGA_P)


def test_period_convergence_shrinks_with_steps(driven_qubit, options):
    """test case for the second-order step-doubling error"""
    coarse = floquet.period_convergence(driven_qubit, 1.0, options)
    fine = floquet.period_convergence(
        driven_qubit, 1.0, attr.evolve(options, steps_per_period=512))
    assert fine < 0.5 * coarse


def test_sideband_of_a_folded_level_carries_the_gap(options):
    """test case for P_abk sitting where eps_b - eps_a + k w_p is the gap"""
    H = PeriodicHamiltonian(np.diag([0.0, 1.3]) * TWO_PI, (), OMEGA_P)
    basis = floquet.solve_floquet(H, 1.0, 64, options)
    F = floquet.fourier_elements(basis, SIGMA_X, 5)
    delta = dissipator.transition_frequencies(basis.quasi_energies, OMEGA_P,
                                              5)
    strong = np.abs(F.P) > 0.5
    assert strong.sum() == 2
    np.testing.assert_allclose(np.abs(delta[strong]), 1.3 * TWO_PI)
    # the downward transition sits on sideband +1 from the folded level
    assert abs(F.element(0, 1, 1)) == pytest.approx(1.0)
