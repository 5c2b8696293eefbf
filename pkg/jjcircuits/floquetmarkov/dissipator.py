'''Floquet-Markov rates, population generator and steady state

Index conventions follow the population master equation

    dp_a/dt = sum_n [L_an p_n - L_na p_a]

so L_ab is the rate of the transition b -> a. The generator R therefore has
L off the diagonal and minus the column sums of L on it; its columns sum to
zero and probability is conserved.
'''

import logging

import attr
import numpy as np
import scipy.constants as const
import scipy.linalg as sla

from .errors import (
    ConfigurationError,
    ContractViolationError,
    NumericalRankError,
    PreconditionError,
    ShapeError,
)
from .hilbert import OperatorMatrix

KERNEL_RCOND = 1e-10
COLUMN_SUM_TOL = 1e-12


def _non_negative(instance, attribute, value):
    if value < 0:
        raise ConfigurationError(
            "{} must be non-negative".format(attribute.name), value=value
        )


@attr.s(frozen=True)
class NoiseModel(object):
    '''Bath spectral function J(w) (white above zero by default) and temperature.

    spectrum, when given, is a callable on an array of angular frequencies;
    it is gated to zero for w <= 0 regardless.
    '''

    J0 = attr.ib(default=1.0, converter=float, validator=_non_negative)
    temperature = attr.ib(default=0.0, converter=float,
                          validator=_non_negative)
    spectrum = attr.ib(default=None)

    @classmethod
    def from_linewidth(cls, kappa, temperature=0.0):
        '''white bath giving a bare-oscillator decay rate kappa (rad/s)'''
        return cls(J0=kappa / (2 * np.pi), temperature=temperature)

    def J(self, omega):
        omega = np.asarray(omega, dtype=float)
        if self.spectrum is None:
            values = np.full(omega.shape, self.J0)
        else:
            values = np.asarray(self.spectrum(omega), dtype=float)
        return np.where(omega > 0, values, 0.0)

    def n_th(self, omega):
        omega = np.abs(np.asarray(omega, dtype=float))
        if self.temperature == 0:
            return np.zeros(omega.shape)
        occupation = np.zeros(omega.shape)
        positive = omega > 0
        occupation[positive] = 1.0 / np.expm1(
            const.hbar * omega[positive] / (const.k * self.temperature)
        )
        return occupation


@attr.s(frozen=True, eq=False)
class SteadyState(object):
    p = attr.ib()
    rho_t0 = attr.ib()
    degeneracy_flag = attr.ib(default=False)
    non_unique = attr.ib(default=False)
    kernel = attr.ib(default=None)


def transition_frequencies(quasi_energies, omega_p, K):
    '''Delta[k + K, a, b] = eps_b - eps_a + k w_p'''
    k_values = np.arange(-K, K + 1)
    eps = np.asarray(quasi_energies)
    return (eps[None, None, :] - eps[None, :, None]
            + k_values[:, None, None] * omega_p)


def rates(F, basis, noise):
    '''golden-rule rates gamma[k + K, a, b] and the transition matrix L'''
    if F.P.shape[1] != len(basis.quasi_energies):
        raise ShapeError(
            "Fourier elements and Floquet basis differ in dimension",
            fourier=F.P.shape[1],
            basis=len(basis.quasi_energies),
        )
    delta = transition_frequencies(basis.quasi_energies, basis.omega_p, F.K)
    # Heaviside with Theta(0) = 0 is folded into J
    gamma = 2 * np.pi * noise.J(delta) * np.abs(F.P) ** 2
    L = gamma.sum(axis=0)
    if noise.temperature > 0:
        reverse = gamma[::-1].transpose(0, 2, 1)
        L = L + np.sum(noise.n_th(delta) * (gamma + reverse), axis=0)
    return gamma, L


def generator(L):
    '''R with L off the diagonal and zero column sums'''
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ShapeError("transition matrix must be square", shape=L.shape)
    R = L - np.diag(np.diag(L))
    R -= np.diag(R.sum(axis=0))
    column_sums = float(np.max(np.abs(R.sum(axis=0)))) if R.size else 0.0
    scale = max(1.0, float(np.max(np.abs(R)))) if R.size else 1.0
    if column_sums > COLUMN_SUM_TOL * scale:
        raise ContractViolationError("generator does not conserve probability",
                                     column_sums=column_sums)
    return R


def _normalize(vector):
    vector = np.real(vector)
    if vector.sum() < 0:
        vector = -vector
    smallest = float(vector.min())
    if smallest < -1e-9 * float(np.abs(vector).max()):
        logging.warning(
            "[jjcircuits-floquetmarkov] steady-state kernel has negative "
            "entry {:.3g}; clipped".format(smallest)
        )
    vector = np.clip(vector, 0.0, None)
    return vector / vector.sum()


def steady_state(L, basis=None, degeneracy_flag=None):
    '''normalized kernel of R; rho_t0 assembled when basis is given'''
    R = generator(L)
    kernel = sla.null_space(R, rcond=KERNEL_RCOND)
    if kernel.shape[1] == 0:
        raise NumericalRankError("generator has no kernel within tolerance",
                                 rcond=KERNEL_RCOND, dim=R.shape[0])
    non_unique = kernel.shape[1] > 1
    if non_unique:
        logging.warning(
            "[jjcircuits-floquetmarkov] steady state is not unique "
            "(kernel dimension {})".format(kernel.shape[1])
        )
        uniform = np.full(R.shape[0], 1.0 / R.shape[0])
        p = _normalize(kernel @ (kernel.T @ uniform))
    else:
        p = _normalize(kernel[:, 0])

    if degeneracy_flag is None:
        degeneracy_flag = bool(basis is not None and basis.degeneracy_flag)
    rho_t0 = None
    if basis is not None:
        rho_t0 = _mixture(p, basis.modes_t0)
    return SteadyState(
        p=p,
        rho_t0=rho_t0,
        degeneracy_flag=degeneracy_flag,
        non_unique=non_unique,
        kernel=kernel if non_unique else None,
    )


def _mixture(p, modes):
    rho = (modes * p[None, :]) @ modes.conj().T
    return 0.5 * (rho + rho.conj().T)


def assemble_rho(ss, basis, t=0.0, hilbert_basis=None):
    '''rho_ss(t) = sum_a p_a |Phi_a(t)><Phi_a(t)| on the strobe grid'''
    phase = (t % basis.period) / basis.period
    if basis.strobe_times is None:
        if abs(phase) > 1e-9 and abs(phase - 1.0) > 1e-9:
            raise PreconditionError("modes have not been propagated", t=t)
        index = 0
    else:
        position = phase * basis.n_samples
        index = int(round(position)) % basis.n_samples
        if abs(position - round(position)) > 1e-6:
            raise PreconditionError("time is not on the strobe grid", t=t)
    rho = _mixture(ss.p, basis.modes_at(index))
    if hilbert_basis is not None:
        return OperatorMatrix(rho, hilbert_basis, hermitian=True)
    return rho


def coherence_rates(L):
    '''Gamma_ab = (1/2) sum_n (L_na + L_nb), decay of rho_ab for a != b'''
    outgoing = np.asarray(L).sum(axis=0)
    return 0.5 * (outgoing[:, None] + outgoing[None, :])


def master_rhs(rho_floquet, L):
    '''time derivative of rho in Floquet-mode components'''
    rho_floquet = np.asarray(rho_floquet, dtype=complex)
    derivative = -coherence_rates(L) * rho_floquet
    populations = np.real(np.diag(rho_floquet))
    np.fill_diagonal(derivative, generator(L) @ populations)
    return derivative


def relaxation_rate(L):
    '''slowest nonzero decay rate of the population generator (rad/s)'''
    rates = np.sort(np.abs(np.real(np.linalg.eigvals(generator(L)))))
    nonzero = rates[1:][rates[1:] > KERNEL_RCOND * max(rates[-1], 1e-300)]
    if not len(nonzero):
        raise NumericalRankError("generator has no decaying mode",
                                 dim=len(rates))
    return float(nonzero[0])
