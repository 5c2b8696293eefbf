'''Brute-force Lindblad evolution to the periodic steady state

Small instances build the one-period superoperator M of the vectorized
master equation (column-stacking convention) and take its fixed point
directly, as the eigenvector of M with eigenvalue 1. The stroboscopic
residual of that state is checked and, when it misses the tolerance,
reduced by stepping. M is a single exponential when H(t) is constant,
otherwise it is built from a symmetric split between the unitary steps of
the Floquet propagator and the dissipator. Larger instances step the
density matrix directly with the same split, checking trace and positivity
after every period.
'''

import logging

import attr
import numpy as np
import scipy.linalg as sla

from . import circuits, floquet, hilbert
from .errors import (
    ConfigurationError,
    IntegrationError,
    OracleTimeoutError,
    ShapeError,
)
from .hilbert import as_array

TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-9
SUPEROPERATOR_MAX_DIM = 32
UNIT_EIGENVALUE_TOL = 1e-12
STEP_DOUBLING_TOL = 1e-6
HORIZON_RATE_PERIODS = 200.0


def _check_positive(instance, attribute, value):
    if not value > 0:
        raise ConfigurationError(
            "{} must be positive".format(attribute.name), value=value
        )


def _check_optional_positive(instance, attribute, value):
    if value is not None:
        _check_positive(instance, attribute, value)


@attr.s(frozen=True)
class OracleConfig(object):
    '''kappa in rad/s; horizon in pump periods.

    The default horizon is 200 relaxation times of the slowest channel:
    slowest_rate when it is known, otherwise kappa. It never drops below
    10 / kappa.
    '''

    kappa = attr.ib(converter=float, validator=_check_positive)
    n_th = attr.ib(default=0.0, converter=float)
    horizon_periods = attr.ib(default=None)
    tol = attr.ib(default=1e-8, converter=float)
    steps_per_period = attr.ib(default=256, converter=int)
    method = attr.ib(default=floquet.MIDPOINT)
    max_dim = attr.ib(default=150, converter=int)
    slowest_rate = attr.ib(default=None,
                           validator=_check_optional_positive)

    def horizon(self, period):
        minimum = int(np.ceil(10.0 / (self.kappa * period)))
        if self.horizon_periods is None:
            rate = self.kappa
            if self.slowest_rate is not None:
                rate = min(rate, float(self.slowest_rate))
            return max(minimum, int(np.ceil(
                HORIZON_RATE_PERIODS / (rate * period))))
        if self.horizon_periods < minimum:
            raise ConfigurationError(
                "oracle horizon shorter than 10 / kappa",
                horizon_periods=self.horizon_periods,
                minimum=minimum,
            )
        return int(self.horizon_periods)


@attr.s(frozen=True, eq=False)
class OracleResult(object):
    '''periods is 0 when the direct fixed point already met tol'''

    rho_t0 = attr.ib()
    periods = attr.ib()
    residual = attr.ib()
    trace_error = attr.ib()
    min_eigenvalue = attr.ib()
    step_error = attr.ib(default=0.0)


def oracle_collapse_operators(model, frame, basis, kappa, n_th=0.0):
    '''Lindblad jump operators of the transmission-line bath.

    Unshunted: the displaced oscillator a~. Shunted: separate a~ and b~
    channels weighted like the two terms of the bath coupling.
    '''
    channels = []
    if model == circuits.UNSHUNTED:
        a = hilbert.embed(
            hilbert.annihilation(basis.mode_dims[1]), 1, basis
        ).entries
        channels.append((1.0, a))
    elif model == circuits.SHUNTED:
        b = hilbert.embed(
            hilbert.annihilation(basis.mode_dims[0]), 0, basis
        ).entries
        a = hilbert.embed(
            hilbert.annihilation(basis.mode_dims[1]), 1, basis
        ).entries
        channels.append((frame.weight_a, a))
        channels.append((frame.weight_b, b))
    else:
        raise ConfigurationError("unknown model", model=model)

    operators = []
    for weight, lowering in channels:
        if weight == 0:
            continue
        operators.append(np.sqrt(kappa * (n_th + 1.0)) * weight * lowering)
        if n_th > 0:
            operators.append(
                np.sqrt(kappa * n_th) * weight * lowering.conj().T
            )
    return operators


def liouvillian(H, collapse):
    '''superoperator of the master equation, vec(rho) stacked by columns'''
    H = as_array(H)
    d = H.shape[0]
    eye = np.eye(d)
    generator = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for c in collapse:
        decay = c.conj().T @ c
        generator += (np.kron(c.conj(), c)
                      - 0.5 * np.kron(eye, decay)
                      - 0.5 * np.kron(decay.T, eye))
    return generator


def vec(rho):
    return np.asarray(rho).reshape(-1, order="F")


def unvec(vector, d):
    return np.asarray(vector).reshape(d, d, order="F")


def is_static(H, T, samples=7):
    '''True when H(t) does not change over the period'''
    H0 = as_array(H(0.0))
    scale = max(1.0, float(np.max(np.abs(H0))))
    for k in range(1, samples):
        if np.max(np.abs(as_array(H(k * T / samples)) - H0)) > 1e-12 * scale:
            return False
    return True


def step_doubling_error(H, T, cfg):
    '''max |U_2n - U_n| of the unitary part; 0 for a constant H'''
    if is_static(H, T):
        return 0.0
    opts = floquet.PropagatorOptions(steps_per_period=cfg.steps_per_period,
                                     method=cfg.method)
    return floquet.period_convergence(H, T, opts)


def period_unitaries(H, T, cfg):
    h = T / float(cfg.steps_per_period)
    return h, [
        floquet.step_propagator(H, step * h, h, cfg.method)
        for step in range(cfg.steps_per_period)
    ]


def period_superoperator(H, collapse, T, cfg):
    '''one-period map acting on vec(rho)'''
    d = as_array(H(0.0)).shape[0]
    if is_static(H, T):
        return sla.expm(T * liouvillian(H(0.0), collapse))

    # column i + j d of the map is the image of the matrix unit E_ij
    h, unitaries = period_unitaries(H, T, cfg)
    units = np.zeros((d * d, d, d), dtype=complex)
    for index in range(d * d):
        row, column = index % d, index // d
        units[index, row, column] = 1.0
    images = _split_period(units, unitaries, collapse, h)
    return np.stack([vec(image) for image in images], axis=1)


def _dissipate(rho, collapse):
    '''dissipator applied to a (stack of) density matrices'''
    out = np.zeros_like(rho)
    for c in collapse:
        c_dag = c.conj().T
        decay = c_dag @ c
        out = out + c @ rho @ c_dag - 0.5 * (decay @ rho + rho @ decay)
    return out


def _dissipator_step(rho, collapse, s):
    '''second-order Taylor of exp(s D); trace preserving term by term'''
    first = _dissipate(rho, collapse)
    return rho + s * first + 0.5 * s * s * _dissipate(first, collapse)


def _split_period(rho, unitaries, collapse, h):
    '''Strang split over one period; neighbouring half dissipator steps
    are merged into full ones'''
    rho = _dissipator_step(rho, collapse, 0.5 * h)
    last = len(unitaries) - 1
    for step, U in enumerate(unitaries):
        rho = U @ rho @ U.conj().T
        rho = _dissipator_step(rho, collapse, h if step < last else 0.5 * h)
    return rho


def trace_norm(matrix):
    matrix = as_array(matrix)
    return float(np.sum(np.abs(np.linalg.eigvalsh(
        0.5 * (matrix + matrix.conj().T)
    ))))


def _checked(rho):
    trace_error = abs(np.trace(rho) - 1.0)
    smallest = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    if trace_error > TRACE_TOL:
        raise IntegrationError("oracle lost trace", trace_error=trace_error)
    if smallest < -POSITIVITY_TOL:
        raise IntegrationError("oracle lost positivity",
                               min_eigenvalue=smallest)
    return float(trace_error), smallest


def ground_state(H0):
    _, vectors = np.linalg.eigh(as_array(H0))
    ground = vectors[:, 0]
    return np.outer(ground, ground.conj())


def fixed_point(period_map, d):
    '''unit-trace Hermitian state with M vec(rho) = vec(rho)'''
    eigenvalues, vectors = np.linalg.eig(period_map)
    distance = np.abs(eigenvalues - 1.0)
    order = np.argsort(distance)
    if len(order) > 1 and distance[order[1]] < UNIT_EIGENVALUE_TOL:
        logging.warning(
            "[jjcircuits-floquetmarkov] oracle period map has more than one "
            "fixed point"
        )
    rho = unvec(vectors[:, order[0]], d)
    # eigenvectors of other eigenvalues are traceless, this one is not
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T)


def lindblad_steady_state(H, collapse, cfg, rho0=None, T=None):
    '''stroboscopic fixed point rho(nT) of the driven master equation

    rho0 seeds the period stepping of large instances; small ones start
    from the fixed point of the period map.
    '''
    T = T if T is not None else H.period
    d = H(0.0).shape[0]
    if d > cfg.max_dim:
        raise ShapeError("oracle instance too large", dim=d,
                         max_dim=cfg.max_dim)
    horizon = cfg.horizon(T)
    step_error = step_doubling_error(H, T, cfg)
    if step_error > STEP_DOUBLING_TOL:
        logging.warning(
            "[jjcircuits-floquetmarkov] oracle step doubling changes the "
            "period propagator by {:.3g}".format(step_error)
        )

    if d <= SUPEROPERATOR_MAX_DIM:
        period_map = period_superoperator(H, collapse, T, cfg)

        def advance(state):
            return unvec(period_map @ vec(state), d)

        rho = fixed_point(period_map, d)
    else:
        h, unitaries = period_unitaries(H, T, cfg)

        def advance(state):
            return _split_period(state, unitaries, collapse, h)

        rho = ground_state(H(0.0)) if rho0 is None else as_array(rho0)

    result = _by_stepping(rho, advance, cfg.tol, horizon,
                          start=0 if d <= SUPEROPERATOR_MAX_DIM else 1)
    result = attr.evolve(result, step_error=step_error)
    logging.info(
        "[jjcircuits-floquetmarkov] oracle converged after {} periods "
        "(residual {:.3g})".format(result.periods, result.residual)
    )
    return result


def _by_stepping(rho, advance, tol, horizon, start=1):
    '''advance period by period until ||rho((n+1)T) - rho(nT)|| < tol;
    trace and positivity are checked at every stroboscopic step'''
    residual = None
    for periods in range(start, horizon + 1):
        trace_error, smallest = _checked(rho)
        following = advance(rho)
        residual = trace_norm(following - rho)
        if residual < tol:
            return OracleResult(rho, periods, residual, trace_error, smallest)
        rho = following
    raise OracleTimeoutError("oracle did not converge within horizon",
                             periods=horizon, residual=residual)


def compare(rho_lindblad, rho_floquet):
    '''(trace distance, Uhlmann fidelity)'''
    first, second = as_array(rho_lindblad), as_array(rho_floquet)
    if first.shape != second.shape:
        raise ShapeError("states differ in shape", left=first.shape,
                         right=second.shape)
    distance = 0.5 * trace_norm(first - second)

    evs, evecs = np.linalg.eigh(0.5 * (first + first.conj().T))
    root = (evecs * np.sqrt(np.clip(evs, 0.0, None))) @ evecs.conj().T
    inner = root @ second @ root
    inner_evs = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    fidelity = float(np.sum(np.sqrt(np.clip(inner_evs, 0.0, None))) ** 2)
    return (float(np.clip(distance, 0.0, 1.0)),
            float(np.clip(fidelity, 0.0, 1.0)))
