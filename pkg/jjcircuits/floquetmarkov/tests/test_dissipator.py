"""
Test module for Floquet-Markov rates and the population steady state
"""

from functools import partial

import numpy as np
import pytest

from jjcircuits.floquetmarkov import dissipator, floquet, hilbert
from jjcircuits.floquetmarkov.circuits import PeriodicHamiltonian
from jjcircuits.floquetmarkov.errors import (
    ConfigurationError,
    NumericalRankError,
    PreconditionError,
    ShapeError,
)

TWO_PI = 2 * np.pi
OMEGA_P = TWO_PI * 1.0
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


def cos_drive(omega, t):
    return np.cos(omega * t)


@pytest.fixture
def driven_qubit_elements():
    static = np.diag([0.0, 0.3]) * TWO_PI
    drives = ((0.2 * TWO_PI * SIGMA_X, partial(cos_drive, OMEGA_P)),)
    H = PeriodicHamiltonian(static, drives, OMEGA_P)
    basis = floquet.solve_floquet(
        H, 1.0, 64, floquet.PropagatorOptions(steps_per_period=256))
    return basis, floquet.fourier_elements(basis, SIGMA_X, 10)


def test_noise_model():
    """test case for the gated white spectrum and thermal occupation"""
    noise = dissipator.NoiseModel(J0=2.0)
    np.testing.assert_allclose(noise.J([-1.0, 0.0, 3.0]), [0.0, 0.0, 2.0])
    np.testing.assert_allclose(noise.n_th([1e9, 5e9]), [0.0, 0.0])
    warm = dissipator.NoiseModel(temperature=0.05)
    assert warm.n_th(TWO_PI * 5e9) > 0
    assert dissipator.NoiseModel.from_linewidth(TWO_PI * 1e5).J0 == \
        pytest.approx(1e5)
    with pytest.raises(ConfigurationError):
        dissipator.NoiseModel(J0=-1.0)


def test_transition_frequencies():
    """test case for Delta[k, a, b] = eps_b - eps_a + k w_p"""
    delta = dissipator.transition_frequencies(np.array([0.0, 1.0]), 10.0, 1)
    assert delta.shape == (3, 2, 2)
    assert delta[1, 0, 1] == pytest.approx(1.0)
    assert delta[2, 1, 0] == pytest.approx(9.0)
    assert delta[0, 0, 0] == pytest.approx(-10.0)


def test_generator_columns_sum_to_zero():
    """test case for probability conservation of R"""
    L = np.array([[0.0, 2.0, 0.5], [0.1, 0.0, 1.0], [0.3, 0.2, 0.0]])
    R = dissipator.generator(L)
    assert np.max(np.abs(R.sum(axis=0))) < 1e-12
    np.testing.assert_allclose(np.diag(R), [-0.4, -2.2, -1.5])
    with pytest.raises(ShapeError):
        dissipator.generator(np.ones((2, 3)))


def test_two_level_detailed_balance():
    """test case for the steady state of a two-level rate matrix"""
    # L[a, b] is the rate b -> a
    L = np.array([[0.0, 3.0], [1.0, 0.0]])
    ss = dissipator.steady_state(L)
    np.testing.assert_allclose(ss.p, [0.75, 0.25])
    assert not ss.non_unique
    assert ss.rho_t0 is None


def test_disconnected_rates_are_not_unique():
    """test case for a multi-dimensional kernel"""
    ss = dissipator.steady_state(np.zeros((3, 3)))
    assert ss.non_unique
    np.testing.assert_allclose(ss.p, np.full(3, 1.0 / 3.0))


def test_driven_qubit_steady_state(driven_qubit_elements):
    """test case for rates, generator and steady state of a driven qubit"""
    basis, F = driven_qubit_elements
    gamma, L = dissipator.rates(F, basis, dissipator.NoiseModel())
    assert gamma.shape == (21, 2, 2)
    assert np.all(gamma >= 0)
    ss = dissipator.steady_state(L, basis)
    assert np.all(ss.p >= 0)
    assert ss.p.sum() == pytest.approx(1.0, abs=1e-10)
    rho = ss.rho_t0
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-14)


def test_steady_state_is_invariant_under_bath_strength(driven_qubit_elements):
    """test case for rescaling J0"""
    basis, F = driven_qubit_elements
    _, weak = dissipator.rates(F, basis, dissipator.NoiseModel(J0=1.0))
    _, strong = dissipator.rates(F, basis, dissipator.NoiseModel(J0=7.5))
    np.testing.assert_allclose(dissipator.steady_state(weak).p,
                               dissipator.steady_state(strong).p, atol=1e-9)


def test_rates_need_matching_dimensions(driven_qubit_elements):
    """test case for a Fourier tensor of the wrong size"""
    basis, F = driven_qubit_elements
    H = PeriodicHamiltonian(np.diag([0.0, 0.3, 0.5]) * TWO_PI, (), OMEGA_P)
    other = floquet.solve_floquet(H, 1.0, 64)
    with pytest.raises(ShapeError):
        dissipator.rates(F, other, dissipator.NoiseModel())


def test_assemble_rho_on_strobe_grid(driven_qubit_elements):
    """test case for rho_ss(t) at grid and off-grid times"""
    basis, F = driven_qubit_elements
    _, L = dissipator.rates(F, basis, dissipator.NoiseModel())
    ss = dissipator.steady_state(L, basis)
    np.testing.assert_allclose(dissipator.assemble_rho(ss, basis, 0.0),
                               ss.rho_t0)
    rho_quarter = dissipator.assemble_rho(ss, basis, 0.25)
    assert np.trace(rho_quarter).real == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        dissipator.assemble_rho(ss, basis, 0.001)


def test_master_rhs_vanishes_at_steady_state(driven_qubit_elements):
    """test case for the secular Floquet master equation"""
    basis, F = driven_qubit_elements
    _, L = dissipator.rates(F, basis, dissipator.NoiseModel())
    ss = dissipator.steady_state(L)
    derivative = dissipator.master_rhs(np.diag(ss.p), L)
    assert np.max(np.abs(derivative)) < 1e-9 * np.max(L)
    coherences = dissipator.coherence_rates(L)
    np.testing.assert_allclose(coherences, coherences.T)


def test_static_oscillator_decays_to_vacuum():
    """test case for a cold oscillator whose levels fold across the zone"""
    omega_0, omega_p = TWO_PI * 5.5e9, TWO_PI * 6e9
    kappa = TWO_PI * 1e6
    a = hilbert.annihilation(3).entries
    H = PeriodicHamiltonian(omega_0 * a.conj().T @ a, (), omega_p)
    basis = floquet.solve_floquet(
        H, H.period, 64, floquet.PropagatorOptions(steps_per_period=64))
    F = floquet.fourier_elements(basis, a + a.conj().T, 10)
    _, L = dissipator.rates(F, basis,
                            dissipator.NoiseModel.from_linewidth(kappa))
    fock = [int(np.argmax(np.abs(basis.modes_t0[n, :]))) for n in range(3)]
    for n in (1, 2):
        assert L[fock[n - 1], fock[n]] == pytest.approx(n * kappa, rel=1e-6)
        assert L[fock[n], fock[n - 1]] < 1e-12 * kappa

    ss = dissipator.steady_state(L, basis)
    assert ss.p[fock[0]] > 0.99
    assert ss.rho_t0[0, 0].real > 0.99
    assert dissipator.relaxation_rate(L) == pytest.approx(kappa, rel=1e-6)


def test_relaxation_rate():
    """test case for the slowest decay of the population generator"""
    assert dissipator.relaxation_rate(np.array([[0.0, 3.0], [1.0, 0.0]])) == \
        pytest.approx(4.0)
    with pytest.raises(NumericalRankError):
        dissipator.relaxation_rate(np.zeros((2, 2)))
