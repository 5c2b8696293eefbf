'''Quantities read off a Floquet-Markov steady state

Populations in the diagnostic eigenbases, impurity, mean excitation, AC
Stark lines with their weights, the Kerr strength of the oscillator ladder,
dressed static spectra, Bessel-averaged predictions and the map from the
shunted normal-mode frame back to the physical basis.
'''

import attr
import numpy as np
import scipy.linalg as sla
from scipy import special

from . import circuits, hilbert
from .errors import (
    KerrIdentificationError,
    PreconditionError,
    ShapeError,
    TruncationError,
)
from .hilbert import BasisSpec, OperatorMatrix, as_array

TWO_PI = 2 * np.pi
DEFAULT_HALF_WIDTH_HZ = 300e6
DEFAULT_WEIGHT_FLOOR = 1e-4
RETENTION_TOL = 1e-4


@attr.s(frozen=True)
class StarkLine(object):
    frequency = attr.ib()
    weight = attr.ib()
    relative_weight = attr.ib()
    source = attr.ib()
    target = attr.ib()
    sideband = attr.ib()

    def as_row(self):
        return attr.asdict(self)


@attr.s(frozen=True)
class DressedSpectrum(object):
    '''Dressed transition frequencies in Hz; labels are (transmon, photon)'''

    cavity = attr.ib()
    qubit = attr.ib()
    anharmonicity = attr.ib()
    cross_kerr = attr.ib()
    cavity_kerr = attr.ib()
    energies = attr.ib(factory=dict)


def populations_in_eigenbasis(rho, eigenvectors):
    '''<v_k|rho|v_k> for each column v_k, and the leakage 1 - sum'''
    rho = as_array(rho)
    vectors = np.asarray(eigenvectors)
    if vectors.shape[0] != rho.shape[0]:
        raise ShapeError("eigenvectors do not live in the state's basis",
                         vectors=vectors.shape, rho=rho.shape)
    populations = np.real(np.einsum("ik,ij,jk->k", vectors.conj(), rho,
                                    vectors))
    populations = np.clip(populations, 0.0, None)
    return populations, float(1.0 - populations.sum())


def fit_vectors(vectors, dim):
    '''zero-pad or truncate column vectors to dim rows'''
    vectors = np.asarray(vectors)
    if vectors.shape[0] >= dim:
        return vectors[:dim]
    padded = np.zeros((dim, vectors.shape[1]), dtype=vectors.dtype)
    padded[:vectors.shape[0]] = vectors
    return padded


def impurity(rho):
    rho = as_array(rho)
    return float(1.0 - np.real(np.trace(rho @ rho)))


def mean_excitation(populations):
    populations = np.asarray(populations)
    return float(np.sum(np.arange(len(populations)) * populations))


def frame_populations(rho, basis, mode=0):
    '''diagonal of the reduced state of one mode (Fock populations)'''
    reduced = hilbert.partial_trace(rho, basis, [mode])
    return np.real(np.diag(reduced)).copy()


# ----------------------------------------------------------------------------
# AC Stark spectroscopy
# ----------------------------------------------------------------------------

def _check_steady_state(ss):
    if ss is None or ss.p is None or not np.sum(ss.p) > 0:
        raise PreconditionError("steady state is empty")


def _line_tensors(F, basis):
    frequencies = (
        basis.quasi_energies[None, None, :]
        - basis.quasi_energies[None, :, None]
        + F.k_values[:, None, None] * basis.omega_p
    ) / TWO_PI
    # |P_{beta alpha, -k}|^2 = |P_{alpha beta k}|^2 for a Hermitian coupling,
    # read on the sideband that carries the frequency
    strengths = np.abs(F.P) ** 2
    return frequencies, strengths


def stark_lines(F, basis, ss, center_hz, half_width_hz=DEFAULT_HALF_WIDTH_HZ,
                floor=DEFAULT_WEIGHT_FLOOR):
    '''Probe resonances alpha -> beta at (eps_b - eps_a + k w_p) / 2 pi with
    weight p_a |P_{b a, -k}|^2, inside the window, above floor * max weight,
    sorted by decreasing weight.'''
    _check_steady_state(ss)
    frequencies, strengths = _line_tensors(F, basis)
    weights = ss.p[None, :, None] * strengths
    inside = np.abs(frequencies - center_hz) <= half_width_hz
    if not np.any(inside):
        return []
    largest = float(np.max(np.where(inside, weights, 0.0)))
    if largest <= 0:
        return []
    selected = np.argwhere(inside & (weights >= floor * largest))
    lines = [
        StarkLine(
            frequency=float(frequencies[k, a, b]),
            weight=float(weights[k, a, b]),
            relative_weight=float(weights[k, a, b] / largest),
            source=int(a),
            target=int(b),
            sideband=int(F.k_values[k]),
        )
        for k, a, b in selected
    ]
    lines.sort(key=lambda line: (-line.weight, line.frequency))
    return lines


def dominant_line(lines):
    return lines[0] if lines else None


def kerr_strength(F, basis, ss, center_hz, half_width_hz=DEFAULT_HALF_WIDTH_HZ,
                  floor=DEFAULT_WEIGHT_FLOOR):
    '''f(1->2) - f(0->1) along the oscillator ladder, in Hz.

    0->1 is the strongest line leaving the most populated mode; 1->2 is the
    strongest in-window line leaving that line's target, excluding the way
    back to the starting mode.
    '''
    _check_steady_state(ss)
    start = int(np.argmax(ss.p))
    lines = [line for line in stark_lines(F, basis, ss, center_hz,
                                          half_width_hz, floor)
             if line.source == start]
    if not lines:
        raise KerrIdentificationError(
            "no in-window line leaves the dominant mode", start=start
        )
    first = lines[0]

    frequencies, strengths = _line_tensors(F, basis)
    middle = first.target
    inside = np.abs(frequencies[:, middle, :] - center_hz) <= half_width_hz
    inside[:, start] = False
    inside[:, middle] = False
    candidates = np.where(inside, strengths[:, middle, :], 0.0)
    if not np.any(candidates > 0):
        raise KerrIdentificationError(
            "no second ladder step found", candidates=lines, middle=middle
        )
    k, target = np.unravel_index(np.argmax(candidates), candidates.shape)
    second = float(frequencies[k, middle, target])
    return second - first.frequency


# ----------------------------------------------------------------------------
# static spectra
# ----------------------------------------------------------------------------

LADDER_LABELS = ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2))


def label_dressed_states(energies, vectors, bare_vectors, basis,
                         labels=LADDER_LABELS):
    '''Assign (transmon level, photon number) labels to dressed eigenstates
    by maximal overlap with bare product states. Returns label -> energy.'''
    d0, d1 = basis.mode_dims
    shaped = vectors.reshape(d0, d1, vectors.shape[1])
    overlaps = np.abs(np.einsum("ik,inj->knj", bare_vectors.conj(), shaped))
    assigned = {}
    used = set()
    for label in labels:
        k, n = label
        index = int(np.argmax(overlaps[k, n]))
        if index in used:
            raise KerrIdentificationError(
                "two bare labels map to the same dressed state",
                label=label, index=index,
            )
        used.add(index)
        assigned[label] = float(energies[index])
    return assigned


def dressed_spectrum(H, bare_hamiltonian, basis):
    '''Dressed frequencies from a static Hamiltonian on transmon x oscillator'''
    energies, vectors = np.linalg.eigh(as_array(H))
    _, bare_vectors = np.linalg.eigh(as_array(bare_hamiltonian))
    E = label_dressed_states(energies, vectors, bare_vectors, basis)
    return DressedSpectrum(
        cavity=(E[0, 1] - E[0, 0]) / TWO_PI,
        qubit=(E[1, 0] - E[0, 0]) / TWO_PI,
        anharmonicity=(E[2, 0] - 2 * E[1, 0] + E[0, 0]) / TWO_PI,
        cross_kerr=(E[1, 1] - E[1, 0] - E[0, 1] + E[0, 0]) / TWO_PI,
        cavity_kerr=(E[0, 2] - 2 * E[0, 1] + E[0, 0]) / TWO_PI,
        energies=E,
    )


def static_spectrum(model, params, basis):
    '''dressed spectrum of the model at A_p = 0'''
    params = attr.evolve(params, A_p=0.0)
    frame = circuits.derive_frame(model, params)
    H = circuits.periodic_hamiltonian(model, params, basis, frame)(0.0)
    bare = circuits.bare_mode_hamiltonian(
        model, params if model == circuits.UNSHUNTED else frame, basis
    )
    return dressed_spectrum(H, bare, basis)


def averaged_model_predictions(frame, basis):
    '''(dressed a~ frequency, a~ Kerr) in Hz from the J0-averaged model'''
    H = circuits.time_averaged_hamiltonian(frame, basis)
    bare = circuits.bare_mode_hamiltonian(
        circuits.SHUNTED, frame, basis, josephson_scale=special.j0(frame.xi)
    )
    spectrum = dressed_spectrum(H, bare, basis)
    return spectrum.cavity, spectrum.cavity_kerr


# ----------------------------------------------------------------------------
# shunted frame back to the physical basis
# ----------------------------------------------------------------------------

def _pad_state(rho, frame_basis, target_dims):
    n_b, n_a = frame_basis.mode_dims
    N_b, N_a = target_dims
    if N_b < n_b or N_a < n_a:
        raise ShapeError("target dims smaller than the frame basis",
                         frame=(n_b, n_a), target=(N_b, N_a))
    padded = np.zeros((N_b, N_a, N_b, N_a), dtype=complex)
    padded[:n_b, :n_a, :n_b, :n_a] = as_array(rho).reshape(n_b, n_a, n_b, n_a)
    return padded.reshape(N_b * N_a, N_b * N_a)


def frame_unitary(frame, target_basis, t=0.0):
    '''W = U_s1^dag U_theta^dag D(t)^dag U_s2^dag on the physical basis.

    Frame states are |psi~> = U_s2 D U_theta U_s1 |psi>, with
    U_s1 = exp(z/2 (b^dag^2 - b^2)), U_theta = exp(theta (a b^dag - a^dag b)),
    D = exp(alpha* a - alpha a^dag) exp(beta* b - beta b^dag) and
    U_s2 = exp(z_a/2 (a^dag^2 - a^2)) exp(z_b/2 (b^dag^2 - b^2)).
    '''
    b = hilbert.embed(
        hilbert.annihilation(target_basis.mode_dims[0]), 0, target_basis
    ).entries
    a = hilbert.embed(
        hilbert.annihilation(target_basis.mode_dims[1]), 1, target_basis
    ).entries
    bd, ad = b.conj().T, a.conj().T
    alpha, beta = frame.alpha(t), frame.beta(t)

    squeeze_1 = sla.expm(0.5 * frame.zeta_bare * (bd @ bd - b @ b))
    rotation = sla.expm(frame.theta * (a @ bd - ad @ b))
    displacement = sla.expm(
        np.conj(alpha) * a - alpha * ad + np.conj(beta) * b - beta * bd
    )
    squeeze_2 = sla.expm(0.5 * frame.zeta_a * (ad @ ad - a @ a)
                         + 0.5 * frame.zeta_b * (bd @ bd - b @ b))
    forward = squeeze_2 @ displacement @ rotation @ squeeze_1
    return forward.conj().T


def to_physical_basis(rho, frame, frame_basis, target_dims=(40, 20), t=0.0):
    '''Map a frame density matrix (b~ x a~) to the bare shunted-mode x
    oscillator Fock basis. The image must stay clear of the two highest
    Fock levels of each mode to within RETENTION_TOL.'''
    target_basis = BasisSpec.fock(*target_dims)
    padded = _pad_state(rho, frame_basis, target_dims)
    W = frame_unitary(frame, target_basis, t)
    image = W @ padded @ W.conj().T
    image = 0.5 * (image + image.conj().T)

    edge = 0.0
    for mode in (0, 1):
        populations = frame_populations(image, target_basis, mode)
        edge += float(np.sum(populations[-2:]))
    if edge > RETENTION_TOL:
        raise TruncationError(
            "physical-basis image reaches the truncation edge",
            edge_population=edge,
            suggested_dims=(2 * target_dims[0], 2 * target_dims[1]),
        )
    return OperatorMatrix(image, target_basis, hermitian=True)
