'''Driven transmon and inductively shunted transmon coupled to an oscillator

Builds the periodic Hamiltonians (displaced unshunted frame and
normal-mode shunted frame), the bath coupling operators, the diagnostic
single-mode eigenbases and the Bessel-averaged static model.
Every energy is an angular frequency in rad/s.
'''

import logging
from functools import partial

import attr
import numpy as np
from scipy import special

from . import hilbert
from .errors import (
    ConfigurationError,
    ConvergenceError,
    SingularFrameError,
    UnstableFrameError,
)
from .hilbert import BasisSpec, OperatorMatrix, embed

UNSHUNTED = "unshunted"
SHUNTED = "shunted"
MODELS = (UNSHUNTED, SHUNTED)

RESONANCE_TOL = 1e-9
QUADRATIC_TOL = 1e-9


def _positive(instance, attribute, value):
    if not value > 0:
        raise ConfigurationError(
            "{} must be positive".format(attribute.name), value=value
        )


def _non_negative(instance, attribute, value):
    if not value >= 0:
        raise ConfigurationError(
            "{} must be non-negative".format(attribute.name), value=value
        )


@attr.s(frozen=True)
class UnshuntedParams(object):
    E_C = attr.ib(converter=float, validator=_positive)
    E_J = attr.ib(converter=float, validator=_non_negative)
    g = attr.ib(converter=float)
    omega_a = attr.ib(converter=float, validator=_positive)
    omega_p = attr.ib(converter=float, validator=_positive)
    A_p = attr.ib(default=0.0, converter=float, validator=_non_negative)
    N_g = attr.ib(default=0.0, converter=float)

    model = UNSHUNTED

    @property
    def period(self):
        return 2 * np.pi / self.omega_p


@attr.s(frozen=True)
class ShuntedParams(object):
    E_C = attr.ib(converter=float, validator=_positive)
    E_J = attr.ib(converter=float, validator=_non_negative)
    E_L = attr.ib(converter=float, validator=_positive)
    g = attr.ib(converter=float)
    omega_a = attr.ib(converter=float, validator=_positive)
    omega_p = attr.ib(converter=float, validator=_positive)
    A_p = attr.ib(default=0.0, converter=float, validator=_non_negative)

    model = SHUNTED

    @property
    def period(self):
        return 2 * np.pi / self.omega_p


def _check_denominator(value, scale, what):
    if abs(value) < RESONANCE_TOL * scale:
        raise SingularFrameError(
            "pump is resonant with {}".format(what),
            denominator=value,
            scale=scale,
        )


# ----------------------------------------------------------------------------
# pump strength
# ----------------------------------------------------------------------------

def nbar_estimate(A_p, omega_a, omega_p):
    '''|A_p|^2 / 4|omega_p - omega_a|^2'''
    _check_denominator(omega_p - omega_a, omega_p, "the bare oscillator")
    return abs(A_p) ** 2 / (4.0 * (omega_p - omega_a) ** 2)


def nbar_est(p):
    return nbar_estimate(p.A_p, p.omega_a, p.omega_p)


def pump_amplitude_for_nbar(nbar, omega_a, omega_p):
    '''inverse of nbar_estimate on A_p >= 0'''
    if nbar < 0:
        raise ConfigurationError("nbar_est must be non-negative", nbar=nbar)
    _check_denominator(omega_p - omega_a, omega_p, "the bare oscillator")
    return 2.0 * abs(omega_p - omega_a) * np.sqrt(nbar)


# ----------------------------------------------------------------------------
# periodic Hamiltonian container
# ----------------------------------------------------------------------------

def _cos_of_phase_drive(xi, omega_p, t):
    return np.cos(xi * np.sin(omega_p * t))


def _sin_of_phase_drive(xi, omega_p, t):
    return np.sin(xi * np.sin(omega_p * t))


@attr.s(frozen=True, eq=False)
class PeriodicHamiltonian(object):
    '''H(t) = static + sum_j c_j(t) * O_j with T-periodic scalar c_j.

    Evaluating at a time costs one linear combination of precomputed
    matrices. time_offset shifts the drive origin: H'(t) = H(t + offset).
    '''

    static = attr.ib(converter=lambda m: np.asarray(m, dtype=complex))
    drives = attr.ib(converter=tuple)
    omega_p = attr.ib(converter=float)
    basis = attr.ib(default=None)
    time_offset = attr.ib(default=0.0, converter=float)

    @property
    def period(self):
        return 2 * np.pi / self.omega_p

    @property
    def dim(self):
        return self.static.shape[0]

    def __call__(self, t):
        t = t + self.time_offset
        h = self.static.copy()
        for operator, coefficient in self.drives:
            h += coefficient(t) * operator
        return h

    def operator(self, t):
        return OperatorMatrix(self(t), self.basis, hermitian=True)

    def shifted(self, delta):
        return attr.evolve(self, time_offset=self.time_offset + delta)


# ----------------------------------------------------------------------------
# unshunted transmon
# ----------------------------------------------------------------------------

def unshunted_xi(A_p, g, omega_a, omega_p):
    '''effective phase-drive amplitude 2 A_p g w_a / [w_p (w_a^2 - w_p^2)]'''
    denominator = omega_p * (omega_a ** 2 - omega_p ** 2)
    _check_denominator(denominator, omega_p ** 3, "the bare oscillator")
    return 2.0 * A_p * g * omega_a / denominator


@attr.s(frozen=True)
class UnshuntedFrame(object):
    '''Classical displacement a = a~ + a_bar(t), theta = theta~ + theta_bar(t)'''

    xi = attr.ib()
    omega_p = attr.ib()
    c_plus = attr.ib()
    c_minus = attr.ib()

    def a_bar(self, t):
        return (self.c_plus * np.exp(1j * self.omega_p * t)
                + self.c_minus * np.exp(-1j * self.omega_p * t))

    def theta_bar(self, t):
        return self.xi * np.sin(self.omega_p * t)


def derive_unshunted_frame(p):
    if p.omega_p == 0:
        raise SingularFrameError("pump frequency is zero")
    _check_denominator(p.omega_a - p.omega_p, p.omega_p, "the bare oscillator")
    xi = unshunted_xi(p.A_p, p.g, p.omega_a, p.omega_p)
    return UnshuntedFrame(
        xi=xi,
        omega_p=p.omega_p,
        c_plus=p.A_p / (2j * (p.omega_a + p.omega_p)),
        c_minus=p.A_p / (2j * (p.omega_a - p.omega_p)),
    )


def _require_kinds(basis, kinds, what):
    if tuple(basis.mode_kinds) != tuple(kinds):
        raise ConfigurationError(
            "{} needs a basis of kinds {}".format(what, kinds),
            mode_kinds=basis.mode_kinds,
        )


def _unshunted_parts(p, basis):
    _require_kinds(basis, (hilbert.CHARGE, hilbert.FOCK), "unshunted model")
    n_max = basis.n_max(0)
    charge = embed(hilbert.charge_number(n_max), 0, basis).entries
    shifted_charge = charge - p.N_g * np.eye(basis.total_dim)
    a = embed(hilbert.annihilation(basis.mode_dims[1]), 1, basis).entries
    adag = a.conj().T
    static = (
        p.omega_a * adag @ a
        + 4.0 * p.E_C * shifted_charge @ shifted_charge
        + 1j * p.g * shifted_charge @ (adag - a)
    )
    cos_op = embed(hilbert.cos_theta(n_max), 0, basis).entries
    sin_op = embed(hilbert.sin_theta(n_max), 0, basis).entries
    return static, cos_op, sin_op, a


def unshunted_hamiltonian(p, basis, frame=None):
    '''displaced-frame H~(t) as a PeriodicHamiltonian'''
    frame = frame or derive_unshunted_frame(p)
    static, cos_op, sin_op, _ = _unshunted_parts(p, basis)
    drives = (
        (-p.E_J * cos_op, partial(_cos_of_phase_drive, frame.xi, p.omega_p)),
        (p.E_J * sin_op, partial(_sin_of_phase_drive, frame.xi, p.omega_p)),
    )
    return PeriodicHamiltonian(static, drives, p.omega_p, basis)


def build_unshunted_hamiltonian(p, frame, basis, t):
    return unshunted_hamiltonian(p, basis, frame).operator(t)


# ----------------------------------------------------------------------------
# inductively shunted transmon
# ----------------------------------------------------------------------------

@attr.s(frozen=True)
class ShuntedFrameParams(object):
    '''Constants of the squeeze / rotate / displace / squeeze chain.

    zeta is the first squeeze measured from the natural (phi, N) quadratures;
    zeta_bare is the same squeeze measured from the Fock basis of the bare
    shunted mode 4 E_C N^2 + E_L phi^2 / 2, which is the physical basis the
    frame states are mapped back to.
    '''

    params = attr.ib()
    theta = attr.ib()
    zeta = attr.ib()
    zeta_bare = attr.ib()
    zeta_a = attr.ib()
    zeta_b = attr.ib()
    omega_1 = attr.ib()
    omega_2 = attr.ib()
    omega_a_tilde = attr.ib()
    omega_b_tilde = attr.ib()
    phi_a = attr.ib()
    phi_b = attr.ib()
    xi = attr.ib()
    alpha_amplitude = attr.ib()
    beta_amplitude = attr.ib()
    weight_a = attr.ib()
    weight_b = attr.ib()

    @property
    def omega_p(self):
        return self.params.omega_p

    def _displacement(self, amplitude, t):
        w_p, w_a = self.params.omega_p, self.params.omega_a
        return amplitude * (w_p * np.sin(w_p * t) + 1j * w_a * np.cos(w_p * t))

    def alpha(self, t):
        return self._displacement(self.alpha_amplitude, t)

    def beta(self, t):
        return self._displacement(self.beta_amplitude, t)


def derive_shunted_frame(p):
    w_a, w_p = p.omega_a, p.omega_p
    kinetic = 8.0 * p.E_C * p.E_L / w_a
    coupling = p.g * np.sqrt(2.0 * p.E_L / w_a)
    theta = -0.5 * np.arctan(
        2.0 * p.g * np.sqrt(2.0 * p.E_L * w_a) / (w_a ** 2 - 8.0 * p.E_C * p.E_L)
    )
    omega_1 = (w_a * np.cos(theta) ** 2 + kinetic * np.sin(theta) ** 2
               - coupling * np.sin(2 * theta))
    omega_2 = (w_a * np.sin(theta) ** 2 + kinetic * np.cos(theta) ** 2
               + coupling * np.sin(2 * theta))
    if omega_1 <= 0 or omega_2 <= 0:
        raise UnstableFrameError(
            "normal-mode frequency is not positive",
            omega_1=omega_1,
            omega_2=omega_2,
        )
    denominator_1 = w_p ** 2 - w_a * omega_1
    denominator_2 = w_p ** 2 - w_a * omega_2
    _check_denominator(denominator_1, w_p ** 2, "the a~ normal mode")
    _check_denominator(denominator_2, w_p ** 2, "the b~ normal mode")

    zeta = np.log(np.sqrt(p.E_L / w_a))
    root = np.sqrt(w_a / (2.0 * p.E_L))
    frame = ShuntedFrameParams(
        params=p,
        theta=theta,
        zeta=zeta,
        zeta_bare=zeta + 0.25 * np.log(8.0 * p.E_C / p.E_L),
        zeta_a=0.25 * np.log(w_a / omega_1),
        zeta_b=0.25 * np.log(w_a / omega_2),
        omega_1=omega_1,
        omega_2=omega_2,
        omega_a_tilde=np.sqrt(w_a * omega_1),
        omega_b_tilde=np.sqrt(w_a * omega_2),
        phi_a=-np.sin(theta) * root * (omega_1 / w_a) ** 0.25,
        phi_b=np.cos(theta) * root * (omega_2 / w_a) ** 0.25,
        xi=p.A_p * w_p * np.sin(2 * theta) * root
        * (1.0 / denominator_2 - 1.0 / denominator_1),
        alpha_amplitude=p.A_p * np.cos(theta) / denominator_1,
        beta_amplitude=p.A_p * np.sin(theta) / denominator_2,
        weight_a=np.cos(theta) * (omega_1 / w_a) ** 0.25,
        weight_b=np.sin(theta) * (omega_2 / w_a) ** 0.25,
    )
    logging.debug(
        "[jjcircuits-floquetmarkov] shunted frame theta={:.6g} xi={:.6g}"
        .format(frame.theta, frame.xi)
    )
    return frame


def quadratic_residual(frame):
    '''Largest off-diagonal entry, in units of omega_a, left after applying
    the symplectic form of the frame chain to the quadratic Hamiltonian in
    (x_a, x_b, p_a, p_b) with x_b = phi and p_b = N.'''
    p = frame.params
    w_a = p.omega_a
    form = np.diag([w_a, p.E_L, w_a, 8.0 * p.E_C])
    form[2, 3] = form[3, 2] = np.sqrt(2.0) * p.g

    squeeze_1 = np.diag([1.0, np.exp(-frame.zeta), 1.0, np.exp(frame.zeta)])
    c, s = np.cos(frame.theta), np.sin(frame.theta)
    rotation = np.array([
        [c, s, 0, 0],
        [-s, c, 0, 0],
        [0, 0, c, s],
        [0, 0, -s, c],
    ])
    scale_1 = (frame.omega_1 / w_a) ** 0.25
    scale_2 = (frame.omega_2 / w_a) ** 0.25
    squeeze_2 = np.diag([scale_1, scale_2, 1.0 / scale_1, 1.0 / scale_2])
    symplectic = squeeze_1 @ rotation @ squeeze_2
    transformed = symplectic.T @ form @ symplectic
    target = np.diag([
        frame.omega_a_tilde, frame.omega_b_tilde,
        frame.omega_a_tilde, frame.omega_b_tilde,
    ])
    return float(np.max(np.abs(transformed - target))) / w_a


def shunted_frame_basis(n_fock_b, n_fock_a):
    '''b~ (transmon-like, mode 0) x a~ (oscillator, mode 1)'''
    return BasisSpec.fock(n_fock_b, n_fock_a)


def _shunted_parts(frame, basis):
    _require_kinds(basis, (hilbert.FOCK, hilbert.FOCK), "shunted model")
    b = embed(hilbert.annihilation(basis.mode_dims[0]), 0, basis).entries
    a = embed(hilbert.annihilation(basis.mode_dims[1]), 1, basis).entries
    quadratic = (frame.omega_a_tilde * a.conj().T @ a
                 + frame.omega_b_tilde * b.conj().T @ b)
    phase = frame.phi_a * (a + a.conj().T) + frame.phi_b * (b + b.conj().T)
    cos_phase, sin_phase = hilbert.matrix_cos_sin(
        OperatorMatrix(phase, basis, hermitian=True)
    )
    return quadratic, cos_phase.entries, sin_phase.entries


def shunted_hamiltonian(frame, basis):
    quadratic, cos_phase, sin_phase = _shunted_parts(frame, basis)
    E_J, w_p = frame.params.E_J, frame.params.omega_p
    drives = (
        (-E_J * cos_phase, partial(_cos_of_phase_drive, frame.xi, w_p)),
        (E_J * sin_phase, partial(_sin_of_phase_drive, frame.xi, w_p)),
    )
    return PeriodicHamiltonian(quadratic, drives, w_p, basis)


def build_shunted_hamiltonian(frame, basis, t):
    return shunted_hamiltonian(frame, basis).operator(t)


def time_averaged_hamiltonian(frame, basis):
    '''static model with the Josephson term scaled by J0(xi)'''
    quadratic, cos_phase, _ = _shunted_parts(frame, basis)
    entries = quadratic - special.j0(frame.xi) * frame.params.E_J * cos_phase
    return OperatorMatrix(entries, basis, hermitian=True)


# ----------------------------------------------------------------------------
# bath coupling
# ----------------------------------------------------------------------------

def bath_coupling(model, frame, basis):
    '''Hermitian system operator coupled to the transmission line'''
    if model == UNSHUNTED:
        _require_kinds(basis, (hilbert.CHARGE, hilbert.FOCK), "unshunted model")
        a = embed(hilbert.annihilation(basis.mode_dims[1]), 1, basis).entries
        return OperatorMatrix(1j * (a - a.conj().T), basis, hermitian=True)
    if model == SHUNTED:
        _require_kinds(basis, (hilbert.FOCK, hilbert.FOCK), "shunted model")
        b = embed(hilbert.annihilation(basis.mode_dims[0]), 0, basis).entries
        a = embed(hilbert.annihilation(basis.mode_dims[1]), 1, basis).entries
        entries = (1j * frame.weight_a * (a - a.conj().T)
                   + 1j * frame.weight_b * (b - b.conj().T))
        return OperatorMatrix(entries, basis, hermitian=True)
    raise ConfigurationError("unknown model", model=model)


# ----------------------------------------------------------------------------
# diagnostic single-mode eigenbases
# ----------------------------------------------------------------------------

@attr.s(frozen=True, eq=False)
class DiagnosticBasis(object):
    '''Sorted eigenpairs of the bare transmon-like mode.

    Vectors are columns in the charge basis (unshunted) or in the Fock basis
    of the bare shunted mode (shunted).
    '''

    model = attr.ib()
    energies = attr.ib()
    vectors = attr.ib()
    resolution = attr.ib()
    converged = attr.ib(default=True)
    deviation = attr.ib(default=0.0)


def transmon_hamiltonian(E_C, E_J, n_max, N_g=0.0):
    '''4 E_C (N - N_g)^2 - E_J cos(theta) in the charge basis'''
    shifted = hilbert.charge_number(n_max).entries - N_g * np.eye(2 * n_max + 1)
    return OperatorMatrix(
        4.0 * E_C * shifted @ shifted - E_J * hilbert.cos_theta(n_max).entries,
        BasisSpec.charge(n_max),
        hermitian=True,
    )


def bare_shunted_frequency(E_C, E_L):
    return np.sqrt(8.0 * E_C * E_L)


def shunted_transmon_hamiltonian(E_C, E_J, E_L, dim):
    '''4 E_C N^2 + E_L phi^2 / 2 - E_J cos(phi) in the bare harmonic basis'''
    c = hilbert.annihilation(dim).entries
    scale = (8.0 * E_C / E_L) ** 0.25
    phi = scale * (c + c.conj().T) / np.sqrt(2.0)
    charge = -1j * (c - c.conj().T) / (np.sqrt(2.0) * scale)
    cos_phi, _ = hilbert.matrix_cos_sin(
        OperatorMatrix(phi, BasisSpec.fock(dim), hermitian=True)
    )
    entries = (4.0 * E_C * charge @ charge + 0.5 * E_L * phi @ phi
               - E_J * cos_phi.entries)
    return OperatorMatrix(
        0.5 * (entries + entries.conj().T), BasisSpec.fock(dim), hermitian=True
    )


def diagnostic_hamiltonian(model, params, resolution):
    if model == UNSHUNTED:
        return transmon_hamiltonian(
            params.E_C, params.E_J, int(resolution), params.N_g
        )
    if model == SHUNTED:
        return shunted_transmon_hamiltonian(
            params.E_C, params.E_J, params.E_L, int(resolution)
        )
    raise ConfigurationError("unknown model", model=model)


def diagnostic_eigenbasis(model, params, resolution, n_levels=20, check=True):
    '''Eigenbasis at the given resolution (N_max for the unshunted model, Fock
    dimension of the bare shunted mode otherwise). With check set, the lowest
    n_levels energies must agree with a doubled resolution to 1e-6 relative.'''
    energies, vectors = np.linalg.eigh(
        diagnostic_hamiltonian(model, params, resolution).entries
    )
    if not check:
        return DiagnosticBasis(model, energies, vectors, resolution, True)

    doubled, _ = np.linalg.eigh(
        diagnostic_hamiltonian(model, params, 2 * resolution).entries
    )
    count = min(n_levels, len(energies))
    scale = max(np.max(np.abs(doubled[:count])), params.E_C)
    deviation = float(np.max(np.abs(energies[:count] - doubled[:count])))
    if deviation > 1e-6 * scale:
        raise ConvergenceError(
            "diagnostic eigenbasis not converged",
            model=model,
            resolution=resolution,
            relative_deviation=deviation / scale,
        )
    return DiagnosticBasis(model, energies, vectors, resolution, True, deviation)


def confined_level_count(diagnostic, E_J):
    '''levels below the top of the cosine well (potential minimum + 2 E_J)'''
    return int(np.sum(diagnostic.energies < E_J))


def confined_level_estimate(diagnostic, E_J):
    '''well depth 2 E_J divided by the 0 -> 1 spacing'''
    spacing = diagnostic.energies[1] - diagnostic.energies[0]
    return int(np.floor(2.0 * E_J / spacing))


def bare_mode_hamiltonian(model, params_or_frame, basis, josephson_scale=1.0):
    '''Mode-0 Hamiltonian whose eigenvectors label dressed states.

    Unshunted: the transmon in the charge window of basis. Shunted frame:
    the b~ part of the static frame Hamiltonian with the a~ mode removed,
    its Josephson term multiplied by josephson_scale.
    '''
    if model == UNSHUNTED:
        p = params_or_frame
        return transmon_hamiltonian(p.E_C, p.E_J, basis.n_max(0), p.N_g)
    if model == SHUNTED:
        frame = params_or_frame
        single = basis.single(0)
        b = hilbert.annihilation(single.mode_dims[0]).entries
        phase = frame.phi_b * (b + b.conj().T)
        cos_phase, _ = hilbert.matrix_cos_sin(
            OperatorMatrix(phase, single, hermitian=True)
        )
        return OperatorMatrix(
            frame.omega_b_tilde * b.conj().T @ b
            - josephson_scale * frame.params.E_J * cos_phase.entries,
            single,
            hermitian=True,
        )
    raise ConfigurationError("unknown model", model=model)


def periodic_hamiltonian(model, params, basis, frame=None):
    '''model dispatch used by the sweep and the oracle'''
    if model == UNSHUNTED:
        return unshunted_hamiltonian(params, basis, frame)
    if model == SHUNTED:
        return shunted_hamiltonian(frame or derive_shunted_frame(params), basis)
    raise ConfigurationError("unknown model", model=model)


def derive_frame(model, params):
    if model == UNSHUNTED:
        return derive_unshunted_frame(params)
    if model == SHUNTED:
        return derive_shunted_frame(params)
    raise ConfigurationError("unknown model", model=model)
