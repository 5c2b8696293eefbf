"""
Test module for the truncated-basis operators
"""

import numpy as np
import pytest

from jjcircuits.floquetmarkov import hilbert
from jjcircuits.floquetmarkov.errors import (
    ContractViolationError,
    InvalidDimensionError,
    ShapeError,
)
from jjcircuits.floquetmarkov.hilbert import BasisSpec, OperatorMatrix


@pytest.fixture
def charge_fock_basis():
    return BasisSpec.charge_fock(2, 3)


def test_basis_dimensions(charge_fock_basis):
    """test case for BasisSpec sizes and charge windows"""
    assert charge_fock_basis.mode_dims == (5, 3)
    assert charge_fock_basis.total_dim == 15
    assert charge_fock_basis.n_max(0) == 2
    assert charge_fock_basis.single(1) == BasisSpec.fock(3)


def test_basis_rejects_bad_modes():
    """test case for invalid mode dimensions and kinds"""
    with pytest.raises(InvalidDimensionError):
        BasisSpec.fock(1)
    with pytest.raises(InvalidDimensionError):
        BasisSpec((4,), (hilbert.CHARGE,))
    with pytest.raises(ShapeError):
        BasisSpec.fock(3).n_max(0)


def test_annihilation_and_number():
    """test case for the ladder operators"""
    a = hilbert.annihilation(4).entries
    assert a[0, 1] == pytest.approx(1.0)
    assert a[2, 3] == pytest.approx(np.sqrt(3.0))
    np.testing.assert_allclose(np.diag(hilbert.number(4).entries).real,
                               [0, 1, 2, 3])
    # [a, a^dag] = 1 except on the truncation edge
    commutator = hilbert.commutator(a, a.conj().T)
    np.testing.assert_allclose(np.diag(commutator).real, [1, 1, 1, -3])


def test_charge_operators():
    """test case for N, cos(theta) and sin(theta) in the charge basis"""
    np.testing.assert_allclose(
        np.diag(hilbert.charge_number(2).entries).real, [-2, -1, 0, 1, 2])
    cos_op = hilbert.cos_theta(2).entries
    sin_op = hilbert.sin_theta(2).entries
    assert cos_op[0, 1] == pytest.approx(0.5)
    assert sin_op[0, 1] == pytest.approx(-0.5j)
    # cos^2 + sin^2 = 1 away from the window edges
    total = cos_op @ cos_op + sin_op @ sin_op
    assert total[2, 2] == pytest.approx(1.0)


def test_operator_matrix_contracts(charge_fock_basis):
    """test case for shape and Hermiticity checks"""
    with pytest.raises(ShapeError):
        OperatorMatrix(np.eye(4), charge_fock_basis)
    lowering = hilbert.annihilation(3)
    with pytest.raises(ContractViolationError):
        OperatorMatrix(lowering.entries, lowering.basis, hermitian=True)
    with pytest.raises(ShapeError):
        lowering + hilbert.number(4)


def test_embed_matches_kron(charge_fock_basis):
    """test case for placing a single-mode operator on the composite basis"""
    a = hilbert.annihilation(3)
    embedded = hilbert.embed(a, 1, charge_fock_basis).entries
    np.testing.assert_allclose(embedded, np.kron(np.eye(5), a.entries))
    with pytest.raises(ShapeError):
        hilbert.embed(a, 0, charge_fock_basis)


def test_matrix_cos_sin_of_diagonal():
    """test case for the matrix cosine and sine"""
    phi = OperatorMatrix(np.diag([0.0, 0.5, 1.0]), BasisSpec.fock(3),
                         hermitian=True)
    cos_phi, sin_phi = hilbert.matrix_cos_sin(phi)
    np.testing.assert_allclose(np.diag(cos_phi.entries).real,
                               np.cos([0.0, 0.5, 1.0]), atol=1e-14)
    np.testing.assert_allclose(np.diag(sin_phi.entries).real,
                               np.sin([0.0, 0.5, 1.0]), atol=1e-14)


def test_partial_trace_of_product_state(charge_fock_basis):
    """test case for reducing a product state to either mode"""
    left = np.diag([0.1, 0.2, 0.3, 0.25, 0.15])
    right = np.diag([0.5, 0.3, 0.2])
    rho = np.kron(left, right)
    np.testing.assert_allclose(
        hilbert.partial_trace(rho, charge_fock_basis, [0]), left, atol=1e-14)
    np.testing.assert_allclose(
        hilbert.partial_trace(rho, charge_fock_basis, [1]), right, atol=1e-14)
    with pytest.raises(ShapeError):
        hilbert.partial_trace(np.eye(4), charge_fock_basis, [0])
