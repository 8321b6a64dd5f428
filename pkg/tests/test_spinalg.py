import cmath
import math

import numpy as np
import pytest
from hypothesis import given

from bellseq import spinalg as sa

from conftest import angles, density_matrices


def mm(a, b):
    """Plain nested-list complex matrix product (oracle independent of numpy)."""
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def dag(a):
    return [[complex(a[j][i]).conjugate() for j in range(len(a))] for i in range(len(a))]


def rot_oracle(h):
    # cos(h) I - i sin(h) sigma_y, written out by hand
    return [[math.cos(h), -math.sin(h)], [math.sin(h), math.cos(h)]]


SZ = [[1, 0], [0, -1]]


def test_pauli_axis_trivial():
    np.testing.assert_allclose(sa.pauli_axis(0.0), sa.SIGMA_Z, atol=1e-15)
    np.testing.assert_allclose(sa.pauli_axis(np.pi / 2), sa.SIGMA_X, atol=1e-15)


def test_pauli_axis_pi_over_3_matches_conjugated_sigma_z():
    expected = mm(mm(rot_oracle(np.pi / 6), SZ), dag(rot_oracle(np.pi / 6)))
    np.testing.assert_allclose(sa.pauli_axis(np.pi / 3), np.array(expected), atol=1e-12)
    np.testing.assert_allclose(sa.pauli_axis(np.pi / 3), [[0.5, 0.8660254037844386], [0.8660254037844386, -0.5]],
                               atol=1e-12)


def test_rotation_examples():
    np.testing.assert_allclose(sa.rotation(0.0), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(sa.rotation(np.pi / 2), [[0, -1], [1, 0]], atol=1e-15)
    r = sa.rotation(np.pi / 4)
    np.testing.assert_allclose(r @ sa.SIGMA_Z @ sa.dagger(r), sa.pauli_axis(np.pi / 2), atol=1e-12)


def test_axis_eigenstates_examples():
    up, down = sa.axis_eigenstates(0.0)
    np.testing.assert_allclose(up, [1, 0])
    np.testing.assert_allclose(down, [0, 1])
    up, _ = sa.axis_eigenstates(np.pi)
    assert sa.same_up_to_phase(up, [0, 1])
    up, _ = sa.axis_eigenstates(np.pi / 2)
    # eigenvector of sigma_x for +1, solved directly: (1, 1)/sqrt 2
    assert sa.same_up_to_phase(up, np.array([1, 1]) / math.sqrt(2))


@given(angles)
def test_axis_eigenstates_are_eigenvectors(theta):
    up, down = sa.axis_eigenstates(theta)
    s = sa.pauli_axis(theta)
    np.testing.assert_allclose(s @ up, up, atol=1e-12)
    np.testing.assert_allclose(s @ down, -down, atol=1e-12)
    assert abs(np.vdot(up, down)) < 1e-12


def test_singlet():
    psi = sa.singlet()
    assert psi[1] == pytest.approx(1 / math.sqrt(2))
    assert np.vdot(psi, psi).real == pytest.approx(1.0)


def test_singlet_same_axis_expectation_by_loop():
    theta = 0.3
    s = [[math.cos(theta), math.sin(theta)], [math.sin(theta), -math.cos(theta)]]
    psi = [0, 1 / math.sqrt(2), -1 / math.sqrt(2), 0]
    total = 0.0
    for a1 in range(2):
        for b1 in range(2):
            for a2 in range(2):
                for b2 in range(2):
                    total += psi[2 * a1 + b1] * s[a1][a2] * s[b1][b2] * psi[2 * a2 + b2]
    assert total == pytest.approx(-1.0, abs=1e-12)
    op = sa.tensor(sa.pauli_axis(theta), sa.pauli_axis(theta))
    assert sa.expectation(op, np.outer(sa.singlet(), sa.singlet())).real == pytest.approx(-1.0, abs=1e-12)


def test_tensor_examples():
    np.testing.assert_allclose(sa.tensor(sa.IDENTITY2, sa.IDENTITY2), np.eye(4))
    np.testing.assert_allclose(np.diag(sa.tensor(sa.SIGMA_Z, sa.SIGMA_Z)), [1, -1, -1, 1])
    v = sa.tensor(sa.SIGMA_X, sa.SIGMA_Z) @ sa.tensor(np.array([1, 0]), np.array([1, 0]))
    np.testing.assert_allclose(v, [0, 0, 1, 0])


def test_tensor_rejects_wrong_dims():
    with pytest.raises(sa.DimensionError):
        sa.tensor(np.eye(4), np.eye(2))


@given(angles, angles)
def test_tensor_mixed_product(a, b):
    ua, _ = sa.axis_eigenstates(a)
    _, db = sa.axis_eigenstates(b)
    ra, rb = sa.rotation(a), sa.rotation(b)
    lhs = sa.tensor(ra, rb) @ sa.tensor(ua, db)
    rhs = sa.tensor(ra @ ua, rb @ db)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_expectation_examples():
    rho = sa.UP_Z
    assert sa.expectation(sa.IDENTITY2, rho) == pytest.approx(1.0)
    assert sa.expectation(sa.SIGMA_Z, rho) == pytest.approx(1.0)
    assert sa.expectation(sa.pauli_axis(np.pi / 5), rho).real == pytest.approx(math.cos(np.pi / 5), abs=1e-12)
    with pytest.raises(sa.DimensionError):
        sa.expectation(np.eye(4), rho)


@given(density_matrices(), angles)
def test_hermitian_expectation_is_real(rho, theta):
    assert abs(sa.expectation(sa.pauli_axis(theta), rho).imag) < 1e-12


def test_project_and_collapse_examples():
    c = sa.project_and_collapse(sa.UP_Z, 0.0, 1)
    assert c.probability == pytest.approx(1.0)
    np.testing.assert_allclose(c.post_state, sa.UP_Z, atol=1e-12)
    c = sa.project_and_collapse(sa.UP_Z, np.pi, 1)
    assert c.probability < 1e-14 and not c.possible
    c = sa.project_and_collapse(sa.UP_Z, np.pi / 3, 1)
    assert c.probability == pytest.approx(math.cos(np.pi / 6) ** 2, abs=1e-12)
    assert c.probability == pytest.approx(0.75, abs=1e-12)


def test_project_rejects_bad_outcome_and_dims():
    with pytest.raises(ValueError):
        sa.project_and_collapse(sa.UP_Z, 0.0, 0)
    with pytest.raises(sa.DimensionError):
        sa.project_and_collapse(np.eye(4) / 4, 0.0, 1)


@given(angles)
def test_pauli_axis_squares_to_identity(theta):
    s = sa.pauli_axis(theta)
    np.testing.assert_allclose(s @ s, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(np.linalg.eigvalsh(s), [-1, 1], atol=1e-12)


@given(angles)
def test_rotation_unitary(a):
    r = sa.rotation(a)
    np.testing.assert_allclose(r @ sa.dagger(r), np.eye(2), atol=1e-12)


@given(angles)
def test_pauli_axis_is_rotated_sigma_z(theta):
    r = sa.rotation(theta / 2)
    np.testing.assert_allclose(sa.pauli_axis(theta), r @ sa.SIGMA_Z @ sa.dagger(r), atol=1e-12)


@given(density_matrices(), angles)
def test_collapse_probabilities_sum_to_one(rho, theta):
    total = sum(sa.project_and_collapse(rho, theta, s).probability for s in (1, -1))
    assert total == pytest.approx(1.0, abs=1e-12)


@given(angles)
def test_singlet_anticorrelated_on_matching_axes(theta):
    op = sa.tensor(sa.pauli_axis(theta), sa.pauli_axis(theta))
    psi = sa.singlet()
    assert sa.expectation(op, np.outer(psi, psi.conj())).real == pytest.approx(-1.0, abs=1e-12)


@given(angles)
def test_singlet_rotation_invariant(a):
    r = sa.tensor(sa.rotation(a), sa.rotation(a))
    assert sa.same_up_to_phase(r @ sa.singlet(), sa.singlet())


def test_density_matrix_validation():
    with pytest.raises(sa.InvalidStateError):
        sa.density_matrix([[1, 0], [0, 1]])
    with pytest.raises(sa.InvalidStateError):
        sa.density_matrix([[1.5, 0], [0, -0.5]])
    with pytest.raises(sa.InvalidStateError):
        sa.density_matrix([[0.5, 1], [0, 0.5]])
    with pytest.raises(sa.InvalidStateError):
        sa.state_vector([1, 1])
    rho = sa.pure_state([1 / math.sqrt(2), 1j / math.sqrt(2)])
    np.testing.assert_allclose(rho, sa.UP_Y)
    assert sa.expectation(sa.SIGMA_Y, rho).real == pytest.approx(1.0)


def test_values_are_read_only():
    with pytest.raises(ValueError):
        sa.SIGMA_X[0, 0] = 2
    with pytest.raises(ValueError):
        sa.singlet()[0] = 1


def test_partial_trace_of_singlet_is_maximally_mixed():
    psi = sa.singlet()
    np.testing.assert_allclose(sa.partial_trace_first(np.outer(psi, psi.conj())), np.eye(2) / 2, atol=1e-15)
    # product state: reduced state is the second factor
    rho = sa.tensor(sa.UP_Z, sa.UP_Y)
    np.testing.assert_allclose(sa.partial_trace_first(rho), sa.UP_Y, atol=1e-15)


def test_global_phase_comparison():
    up, _ = sa.axis_eigenstates(0.7)
    assert sa.same_up_to_phase(up, cmath.exp(0.4j) * up)
    assert not sa.same_up_to_phase(up, sa.axis_eigenstates(1.7)[0])
