'''Operators on truncated Fock, charge and tensor-product Hilbert spaces

All matrices are dense complex numpy arrays. Energies carried by operators
built elsewhere are angular frequencies (rad/s, hbar = 1).
'''

import attr
import numpy as np
from functools import reduce

from .errors import ContractViolationError, InvalidDimensionError, ShapeError

FOCK = "fock"
CHARGE = "charge"

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-9


def _check_dims(instance, attribute, value):
    if not value:
        raise InvalidDimensionError("basis needs at least one mode")
    for dim in value:
        if int(dim) != dim or dim < 2:
            raise InvalidDimensionError(
                "every mode dimension must be an integer >= 2",
                mode_dims=value,
            )


def _check_kinds(instance, attribute, value):
    if len(value) != len(instance.mode_dims):
        raise ShapeError(
            "mode_kinds and mode_dims differ in length",
            mode_dims=instance.mode_dims,
            mode_kinds=value,
        )
    for kind, dim in zip(value, instance.mode_dims):
        if kind not in (FOCK, CHARGE):
            raise InvalidDimensionError("unknown mode kind", kind=kind)
        if kind == CHARGE and dim % 2 == 0:
            raise InvalidDimensionError(
                "charge mode dimension must be odd", dim=dim
            )


@attr.s(frozen=True)
class BasisSpec(object):
    '''Ordered list of truncated modes; mode 0 is the leftmost tensor factor'''

    mode_dims = attr.ib(converter=tuple, validator=_check_dims)
    mode_kinds = attr.ib(converter=tuple, validator=_check_kinds)

    @property
    def total_dim(self):
        return int(np.prod(self.mode_dims))

    @property
    def n_modes(self):
        return len(self.mode_dims)

    def n_max(self, mode_index):
        '''charge window half-width of a charge mode'''
        if self.mode_kinds[mode_index] != CHARGE:
            raise ShapeError("mode is not a charge mode", mode=mode_index)
        return (self.mode_dims[mode_index] - 1) // 2

    def single(self, mode_index):
        return BasisSpec(
            (self.mode_dims[mode_index],), (self.mode_kinds[mode_index],)
        )

    @classmethod
    def fock(cls, *dims):
        return cls(dims, (FOCK,) * len(dims))

    @classmethod
    def charge(cls, n_max):
        return cls((2 * n_max + 1,), (CHARGE,))

    @classmethod
    def charge_fock(cls, n_max, n_fock):
        '''transmon charge states (mode 0) x oscillator Fock states (mode 1)'''
        return cls((2 * n_max + 1, n_fock), (CHARGE, FOCK))


def _natural_scale(entries):
    return max(1.0, float(np.max(np.abs(entries)))) if entries.size else 1.0


@attr.s(frozen=True, eq=False)
class OperatorMatrix(object):
    '''Dense square matrix bound to the basis it acts on.

    The hermitian and unitary flags are checked at construction. Hermiticity
    is judged relative to the largest entry so that operators in rad/s pass
    the same test as dimensionless ones.
    '''

    entries = attr.ib(converter=lambda m: np.asarray(m, dtype=complex))
    basis = attr.ib(validator=attr.validators.instance_of(BasisSpec))
    hermitian = attr.ib(default=False)
    unitary = attr.ib(default=False)

    def __attrs_post_init__(self):
        shape = self.entries.shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise ShapeError("operator matrix must be square", shape=shape)
        if shape[0] != self.basis.total_dim:
            raise ShapeError(
                "matrix size does not match basis",
                shape=shape,
                total_dim=self.basis.total_dim,
            )
        if self.hermitian:
            deviation = np.max(np.abs(self.entries - self.entries.conj().T))
            if deviation > HERMITIAN_TOL * _natural_scale(self.entries):
                raise ContractViolationError(
                    "matrix flagged Hermitian is not", deviation=deviation
                )
        if self.unitary:
            deviation = np.max(np.abs(
                self.entries.conj().T @ self.entries - np.eye(shape[0])
            ))
            if deviation > UNITARY_TOL:
                raise ContractViolationError(
                    "matrix flagged unitary is not", deviation=deviation
                )

    @property
    def dim(self):
        return self.entries.shape[0]

    def dag(self):
        return OperatorMatrix(
            self.entries.conj().T, self.basis, self.hermitian, self.unitary
        )

    def _coerce(self, other):
        if isinstance(other, OperatorMatrix):
            if other.basis != self.basis:
                raise ShapeError(
                    "operators act on different bases",
                    left=self.basis.mode_dims,
                    right=other.basis.mode_dims,
                )
            return other.entries
        return other

    def __add__(self, other):
        return OperatorMatrix(self.entries + self._coerce(other), self.basis)

    def __sub__(self, other):
        return OperatorMatrix(self.entries - self._coerce(other), self.basis)

    def __mul__(self, scalar):
        return OperatorMatrix(self.entries * scalar, self.basis)

    __rmul__ = __mul__

    def __neg__(self):
        return OperatorMatrix(-self.entries, self.basis, self.hermitian)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(
                self.entries @ self._coerce(other), self.basis
            )
        return self.entries @ np.asarray(other)

    def as_hermitian(self):
        '''re-flag as Hermitian (validated)'''
        return OperatorMatrix(self.entries, self.basis, hermitian=True)


def as_array(op):
    '''numpy view of an OperatorMatrix or array-like'''
    if isinstance(op, OperatorMatrix):
        return op.entries
    return np.asarray(op, dtype=complex)


def annihilation(dim):
    '''lowering operator with sqrt(n) at (n-1, n)'''
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError("annihilation needs dim >= 2", dim=dim)
    dim = int(dim)
    entries = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
    return OperatorMatrix(entries, BasisSpec.fock(dim))


def number(dim):
    a = annihilation(dim)
    return OperatorMatrix(
        a.entries.conj().T @ a.entries, a.basis, hermitian=True
    )


def charge_number(n_max):
    '''diag(-N_max .. N_max)'''
    if int(n_max) != n_max or n_max < 1:
        raise InvalidDimensionError("charge window needs N_max >= 1",
                                    n_max=n_max)
    n_max = int(n_max)
    entries = np.diag(np.arange(-n_max, n_max + 1, dtype=float))
    return OperatorMatrix(entries, BasisSpec.charge(n_max), hermitian=True)


def _charge_hopping(n_max):
    if int(n_max) != n_max or n_max < 1:
        raise InvalidDimensionError("charge window needs N_max >= 1",
                                    n_max=n_max)
    # sum_N |N><N+1|
    return np.eye(2 * int(n_max) + 1, k=1)


def cos_theta(n_max):
    hop = _charge_hopping(n_max)
    return OperatorMatrix(
        0.5 * (hop + hop.T), BasisSpec.charge(int(n_max)), hermitian=True
    )


def sin_theta(n_max):
    hop = _charge_hopping(n_max)
    return OperatorMatrix(
        (hop - hop.T) / 2j, BasisSpec.charge(int(n_max)), hermitian=True
    )


def identity(basis):
    return OperatorMatrix(
        np.eye(basis.total_dim), basis, hermitian=True, unitary=True
    )


def embed(op, mode_index, basis):
    '''I x ... x op x ... x I on the composite basis'''
    if not 0 <= mode_index < basis.n_modes:
        raise ShapeError("mode index out of range", mode_index=mode_index,
                         n_modes=basis.n_modes)
    entries = as_array(op)
    if entries.shape[0] != basis.mode_dims[mode_index]:
        raise ShapeError(
            "operator dimension does not match mode",
            op_dim=entries.shape[0],
            mode_dim=basis.mode_dims[mode_index],
        )
    factors = [np.eye(dim) for dim in basis.mode_dims]
    factors[mode_index] = entries
    hermitian = isinstance(op, OperatorMatrix) and op.hermitian
    return OperatorMatrix(reduce(np.kron, factors), basis, hermitian)


def matrix_cos_sin(phi):
    '''cos and sin of a Hermitian operator through its eigendecomposition'''
    entries = as_array(phi)
    deviation = np.max(np.abs(entries - entries.conj().T))
    if deviation > HERMITIAN_TOL * _natural_scale(entries):
        raise ContractViolationError(
            "matrix_cos_sin needs a Hermitian argument", deviation=deviation
        )
    basis = (phi.basis if isinstance(phi, OperatorMatrix)
             else BasisSpec.fock(entries.shape[0]))
    eigvals, eigvecs = np.linalg.eigh(0.5 * (entries + entries.conj().T))
    cos_part = (eigvecs * np.cos(eigvals)) @ eigvecs.conj().T
    sin_part = (eigvecs * np.sin(eigvals)) @ eigvecs.conj().T
    return (
        OperatorMatrix(0.5 * (cos_part + cos_part.conj().T), basis,
                       hermitian=True),
        OperatorMatrix(0.5 * (sin_part + sin_part.conj().T), basis,
                       hermitian=True),
    )


def partial_trace(rho, basis, keep):
    '''reduced density matrix on the modes listed in keep'''
    entries = as_array(rho)
    if entries.shape != (basis.total_dim, basis.total_dim):
        raise ShapeError("density matrix does not match basis",
                         shape=entries.shape, total_dim=basis.total_dim)
    keep = sorted(set(keep))
    dims = list(basis.mode_dims)
    tensor = entries.reshape(dims + dims)
    count = len(dims)
    for mode in reversed(range(len(dims))):
        if mode in keep:
            continue
        tensor = np.trace(tensor, axis1=mode, axis2=mode + count)
        count -= 1
    kept_dim = int(np.prod([dims[mode] for mode in keep]))
    return tensor.reshape(kept_dim, kept_dim)


def commutator(a, b):
    a, b = as_array(a), as_array(b)
    return a @ b - b @ a
