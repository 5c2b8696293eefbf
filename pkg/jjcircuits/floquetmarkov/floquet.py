'''Floquet modes, quasi-energies and Fourier matrix elements

The one-period propagator is built with fixed unitary steps (exponential
midpoint or fourth-order Magnus), each step exponentiated through the
eigendecomposition of its Hermitian generator.
'''

import logging

import attr
import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment

from .errors import (
    AliasingError,
    ConfigurationError,
    ContractViolationError,
    IntegrationError,
    PreconditionError,
)
from .hilbert import as_array

MIDPOINT = "midpoint"
MAGNUS4 = "magnus4"
METHODS = (MIDPOINT, MAGNUS4)

DEGENERACY_TOL = 1e-6
PERIODICITY_TOL = 1e-7
ORTHONORMALITY_TOL = 1e-8
SYMMETRY_TOL = 1e-8
TAIL_TOL = 1e-6


def _check_steps(instance, attribute, value):
    if value < 32:
        raise ConfigurationError("steps_per_period must be >= 32", value=value)


def _check_method(instance, attribute, value):
    if value not in METHODS:
        raise ConfigurationError("unknown propagation method", method=value)


def _check_tol(instance, attribute, value):
    if not 0 < value <= 1e-8:
        raise ConfigurationError("unitarity_tol must be in (0, 1e-8]",
                                 value=value)


@attr.s(frozen=True)
class PropagatorOptions(object):
    steps_per_period = attr.ib(default=1024, converter=int,
                               validator=_check_steps)
    method = attr.ib(default=MIDPOINT, validator=_check_method)
    unitarity_tol = attr.ib(default=1e-9, converter=float,
                            validator=_check_tol)


@attr.s(frozen=True, eq=False)
class FloquetBasis(object):
    '''Floquet modes (columns) and first-zone quasi-energies (rad/s).

    strobe_times / strobe_modes are filled by propagate_modes; strobe_modes
    has shape (N_t, dim, dim) with strobe_modes[j][:, alpha] = Phi_alpha(t_j).
    '''

    period = attr.ib()
    quasi_energies = attr.ib()
    modes_t0 = attr.ib()
    degenerate_pairs = attr.ib(factory=list)
    strobe_times = attr.ib(default=None)
    strobe_modes = attr.ib(default=None)
    periodicity_residual = attr.ib(default=None)

    @property
    def omega_p(self):
        return 2 * np.pi / self.period

    @property
    def dim(self):
        return self.modes_t0.shape[0]

    @property
    def degeneracy_flag(self):
        return bool(self.degenerate_pairs)

    @property
    def n_samples(self):
        return 0 if self.strobe_times is None else len(self.strobe_times)

    def modes_at(self, index):
        if self.strobe_modes is None:
            if index == 0:
                return self.modes_t0
            raise PreconditionError("modes have not been propagated")
        return self.strobe_modes[index]


@attr.s(frozen=True, eq=False)
class FourierElements(object):
    '''P[k + K, alpha, beta] for k = -K..K'''

    k_values = attr.ib()
    P = attr.ib()
    coupling = attr.ib()
    tail_fraction = attr.ib(default=0.0)

    @property
    def K(self):
        return int(self.k_values[-1])

    def element(self, alpha, beta, k):
        return self.P[k + self.K, alpha, beta]


def fold_quasi_energy(energy, omega_p):
    '''map into the zone (-omega_p / 2, omega_p / 2]'''
    return energy - omega_p * np.ceil((energy - omega_p / 2.0) / omega_p)


def _expm_hermitian(generator):
    '''exp(-i G) for Hermitian G'''
    evs, evecs = sla.eigh(generator)
    return evecs @ (np.exp(-1.0j * evs)[:, None] * evecs.conj().T)


def step_propagator(H, t, h, method):
    '''propagator over [t, t + h]'''
    if method == MIDPOINT:
        return _expm_hermitian(h * H(t + 0.5 * h))
    offset = np.sqrt(3.0) / 6.0
    h1 = H(t + (0.5 - offset) * h)
    h2 = H(t + (0.5 + offset) * h)
    generator = (0.5 * h * (h1 + h2)
                 - 1j * (np.sqrt(3.0) * h ** 2 / 12.0) * (h2 @ h1 - h1 @ h2))
    return _expm_hermitian(0.5 * (generator + generator.conj().T))


def _unitarity_error(U):
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def propagate_strobe(H, T, n_samples, opts=None):
    '''U(t_j, 0) for t_j = j T / n_samples, j = 0..n_samples.

    The number of steps per sample interval is rounded up so that the total
    is at least opts.steps_per_period. The last entry is the monodromy.
    '''
    opts = opts or PropagatorOptions()
    if T <= 0:
        raise PreconditionError("period must be positive", period=T)
    substeps = int(np.ceil(opts.steps_per_period / float(n_samples)))
    h = T / float(n_samples * substeps)
    dim = H(0.0).shape[0]

    propagators = np.empty((n_samples + 1, dim, dim), dtype=complex)
    U = np.eye(dim, dtype=complex)
    propagators[0] = U
    step = 0
    for sample in range(n_samples):
        for _ in range(substeps):
            U = step_propagator(H, step * h, h, opts.method) @ U
            step += 1
        propagators[sample + 1] = U

    error = _unitarity_error(U)
    if error > opts.unitarity_tol:
        raise IntegrationError(
            "one-period propagator is not unitary",
            deviation=error,
            steps=n_samples * substeps,
            step_size=h,
            method=opts.method,
        )
    return propagators


def propagate_period(H, T, opts=None):
    '''monodromy U(T, 0)'''
    opts = opts or PropagatorOptions()
    return propagate_strobe(H, T, 1, opts)[-1]


def period_convergence(H, T, opts=None):
    '''max |U_2n - U_n| between steps_per_period and twice as many'''
    opts = opts or PropagatorOptions()
    coarse = propagate_period(H, T, opts)
    fine = propagate_period(
        H, T, attr.evolve(opts, steps_per_period=2 * opts.steps_per_period)
    )
    return float(np.max(np.abs(fine - coarse)))


def _degenerate_pairs(energies, omega_p, order):
    pairs = []
    count = len(energies)
    if count < 2:
        return pairs
    for index in range(count):
        nxt = (index + 1) % count
        gap = energies[nxt] - energies[index]
        if nxt == 0:
            gap += omega_p
        if abs(gap) < DEGENERACY_TOL * omega_p:
            pairs.append((int(order[index]), int(order[nxt])))
    return pairs


def floquet_modes(U, T):
    '''Modes at t = 0 and folded quasi-energies from the monodromy.

    A complex Schur form of a unitary matrix is diagonal, so its Schur
    vectors are orthonormal eigenvectors even inside degenerate clusters.
    '''
    U = as_array(U)
    omega_p = 2 * np.pi / T
    try:
        schur_form, vectors = sla.schur(U, output="complex")
    except (sla.LinAlgError, ValueError) as error:
        raise IntegrationError("eigensolver failed on monodromy",
                               reason=str(error))
    eigenvalues = np.diag(schur_form)
    off_circle = float(np.max(np.abs(np.abs(eigenvalues) - 1.0)))
    if off_circle > 1e-9:
        raise IntegrationError("monodromy eigenvalues off the unit circle",
                               deviation=off_circle)

    energies = fold_quasi_energy(-np.angle(eigenvalues) / T, omega_p)
    order = np.argsort(energies, kind="stable")
    energies = energies[order]
    vectors = vectors[:, order]

    pairs = _degenerate_pairs(energies, omega_p, np.arange(len(energies)))
    if pairs:
        logging.warning(
            "[jjcircuits-floquetmarkov] {} near-degenerate quasi-energy pairs"
            .format(len(pairs))
        )
    return FloquetBasis(
        period=T,
        quasi_energies=energies,
        modes_t0=vectors,
        degenerate_pairs=pairs,
    )


def propagate_modes(basis, H, n_samples=64, opts=None, propagators=None):
    '''Phi_alpha(t_j) = exp(i eps_alpha t_j) U(t_j, 0) Phi_alpha(0)'''
    if n_samples < 64 or n_samples & (n_samples - 1):
        raise PreconditionError("n_samples must be a power of two >= 64",
                                n_samples=n_samples)
    if propagators is None:
        propagators = propagate_strobe(H, basis.period, n_samples, opts)
    if len(propagators) != n_samples + 1:
        raise PreconditionError("propagator grid does not match n_samples",
                                grid=len(propagators), n_samples=n_samples)

    times = basis.period * np.arange(n_samples + 1) / float(n_samples)
    phases = np.exp(1j * np.outer(times, basis.quasi_energies))
    modes = propagators @ basis.modes_t0 * phases[:, None, :]

    residual = float(np.max(np.abs(modes[-1] - basis.modes_t0)))
    if residual > PERIODICITY_TOL:
        raise ContractViolationError("Floquet modes are not T-periodic",
                                     residual=residual)
    eye = np.eye(basis.dim)
    overlap = np.conj(np.swapaxes(modes, 1, 2)) @ modes - eye
    orthonormality = float(np.max(np.abs(overlap)))
    if orthonormality > ORTHONORMALITY_TOL:
        raise ContractViolationError("Floquet modes lost orthonormality",
                                     deviation=orthonormality)

    return attr.evolve(
        basis,
        strobe_times=times[:-1],
        strobe_modes=modes[:-1],
        periodicity_residual=residual,
    )


def solve_floquet(H, T, n_samples=64, opts=None):
    '''propagate once on the strobe grid and return the filled basis'''
    propagators = propagate_strobe(H, T, n_samples, opts)
    basis = floquet_modes(propagators[-1], T)
    return propagate_modes(basis, H, n_samples, opts, propagators)


def fourier_elements(basis, coupling, K=20):
    '''P_{alpha beta k} = (1/T) int e^{+i k w_p t} <Phi_a(t)|c|Phi_b(t)> dt

    with c the Hermitian coupling (i(a - a^dag) carries the factor i of the
    printed prefactor). Evaluated as a DFT over the strobe grid.

    With this sign P_{alpha beta k} is nonzero exactly on the sideband where
    eps_b - eps_a + k w_p is the physical gap, so rates and probe lines read
    the same [k, a, b] entry as transition_frequencies.
    '''
    if basis.strobe_modes is None:
        raise PreconditionError("modes have not been propagated")
    n_samples = basis.n_samples
    if K > n_samples // 2 - 1:
        raise AliasingError("too many sidebands for the strobe grid",
                            K=K, n_samples=n_samples)
    c = as_array(coupling)
    modes = basis.strobe_modes
    brackets = np.conj(np.swapaxes(modes, 1, 2)) @ c @ modes
    spectrum = np.fft.fft(brackets, axis=0) / n_samples

    k_values = np.arange(-K, K + 1)
    # np.fft uses e^{-i}, so sideband k sits in bin -k
    P = spectrum[(-k_values) % n_samples]

    total = float(np.sum(np.abs(spectrum) ** 2))
    kept = float(np.sum(np.abs(P) ** 2))
    tail = (total - kept) / total if total > 0 else 0.0
    if tail > TAIL_TOL:
        logging.warning(
            "[jjcircuits-floquetmarkov] Fourier tail fraction {:.3g} beyond "
            "{} sidebands".format(tail, K)
        )

    hermitian = np.max(np.abs(c - c.conj().T)) <= 1e-12 * max(
        1.0, float(np.max(np.abs(c))) if c.size else 1.0
    )
    if hermitian:
        violation = float(np.max(np.abs(
            P[::-1].transpose(0, 2, 1) - np.conj(P)
        ))) if P.size else 0.0
        if violation > SYMMETRY_TOL:
            raise ContractViolationError(
                "Fourier elements violate P_ba,-k = conj(P_ab,k)",
                violation=violation,
            )
    return FourierElements(k_values, P, coupling, tail)


def match_modes(previous, current):
    '''Permutation order such that current[:, order[i]] continues
    previous[:, i], from maximal overlap |<prev_i|curr_j>|.'''
    overlap = np.abs(np.conj(as_array(previous)).T @ as_array(current))
    rows, cols = linear_sum_assignment(-overlap)
    order = np.empty(len(rows), dtype=int)
    order[rows] = cols
    return order, overlap[rows, cols]
