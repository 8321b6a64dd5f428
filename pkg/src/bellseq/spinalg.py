"""Dense complex linear algebra for one and two spin-1/2 systems.

Operators and states are plain numpy arrays (complex128) of dimension 2 or 4.
Measurement axes lie in the x-z plane; an axis at angle ``theta`` (radians,
measured from +z towards +x) has spin operator

    sigma_theta = cos(theta) sigma_z + sin(theta) sigma_x
                = R(theta/2) sigma_z R(theta/2)^dagger,   R(a) = exp(-i a sigma_y).

Two-spin vectors use the product basis order (uu, ud, du, dd).

``pauli_axis``, ``rotation``, ``tensor`` and ``expectation`` broadcast over
leading axes so that angle grids can be evaluated in one call.
"""

from typing import NamedTuple, Optional

import numpy as np

from .tolerances import TOL, Tolerances


class DimensionError(ValueError):
    pass


class InvalidStateError(ValueError):
    pass


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


IDENTITY2 = _frozen(np.eye(2))
IDENTITY4 = _frozen(np.eye(4))
SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])


def pauli_axis(theta):
    """Spin operator along the x-z plane axis at angle ``theta``."""
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta)[..., None, None]
    s = np.sin(theta)[..., None, None]
    return c * SIGMA_Z + s * SIGMA_X


def rotation(half_angle):
    """exp(-i a sigma_y) = cos(a) I - i sin(a) sigma_y."""
    a = np.asarray(half_angle, dtype=float)
    c = np.cos(a)[..., None, None]
    s = np.sin(a)[..., None, None]
    return c * IDENTITY2 - 1j * s * SIGMA_Y


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def axis_eigenstates(theta):
    """Return ``(up, down)`` eigenvectors of ``pauli_axis(theta)``.

    up = (cos(theta/2), sin(theta/2)), down = (-sin(theta/2), cos(theta/2)).
    """
    h = 0.5 * float(theta)
    up = _frozen([np.cos(h), np.sin(h)])
    down = _frozen([-np.sin(h), np.cos(h)])
    return up, down


def singlet():
    r = 1.0 / np.sqrt(2.0)
    return _frozen([0.0, r, -r, 0.0])


def tensor(a, b):
    """Kronecker product of two 2-dim vectors or 2x2 matrices (broadcasting)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[-1] != 2 or b.shape[-1] != 2:
        raise DimensionError("tensor expects 2-dimensional factors")
    if a.ndim >= 2 and a.shape[-2:] == (2, 2) and b.ndim >= 2 and b.shape[-2:] == (2, 2):
        out = np.einsum("...ij,...kl->...ikjl", a, b)
        return out.reshape(out.shape[:-4] + (4, 4))
    if a.ndim == 1 and b.ndim == 1:
        return np.einsum("i,k->ik", a, b).reshape(4)
    raise DimensionError("tensor operands must both be vectors or both be matrices")


def expectation(op, rho):
    """Tr(op . rho); broadcasts over leading axes of either argument."""
    op = np.asarray(op, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if op.shape[-2:] != rho.shape[-2:]:
        raise DimensionError(f"operator {op.shape[-2:]} vs state {rho.shape[-2:]}")
    return np.einsum("...ij,...ji->...", op, rho)


def state_vector(amplitudes, tol: Tolerances = TOL):
    v = np.asarray(amplitudes, dtype=complex)
    if v.ndim != 1 or v.shape[0] not in (2, 4):
        raise DimensionError(f"state vectors have dimension 2 or 4, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidStateError("non-finite amplitude")
    if abs(np.vdot(v, v).real - 1.0) > tol.norm:
        raise InvalidStateError(f"state not normalised: {np.vdot(v, v).real!r}")
    return _frozen(v)


def density_matrix(m, tol: Tolerances = TOL):
    """Validate and freeze a density matrix (hermitian, unit trace, PSD)."""
    m = np.asarray(m, dtype=complex)
    if m.shape not in ((2, 2), (4, 4)):
        raise DimensionError(f"density matrices are 2x2 or 4x4, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("non-finite entry")
    if np.max(np.abs(m - dagger(m))) > tol.eq:
        raise InvalidStateError("density matrix not hermitian")
    if abs(np.trace(m) - 1.0) > tol.eq:
        raise InvalidStateError(f"trace {np.trace(m)!r} != 1")
    if np.min(np.linalg.eigvalsh(m)) < -tol.psd:
        raise InvalidStateError("density matrix has negative eigenvalue")
    return _frozen(m)


def pure_state(vector, tol: Tolerances = TOL):
    v = state_vector(vector, tol)
    return _frozen(np.outer(v, np.conj(v)))


def bloch_state(rx, ry, rz):
    """(I + r.sigma)/2 for a Bloch vector with |r| <= 1."""
    if rx * rx + ry * ry + rz * rz > 1.0 + 1e-12:
        raise InvalidStateError("Bloch vector longer than 1")
    return density_matrix(0.5 * (IDENTITY2 + rx * SIGMA_X + ry * SIGMA_Y + rz * SIGMA_Z))


MAXIMALLY_MIXED = _frozen(0.5 * IDENTITY2)
UP_Z = _frozen([[1, 0], [0, 0]])
UP_Y = _frozen(0.5 * np.array([[1, -1j], [1j, 1]]))


def same_up_to_phase(a, b, tol: Tolerances = TOL):
    """True if unit vectors ``a`` and ``b`` differ only by a global phase."""
    return abs(abs(np.vdot(a, b)) - 1.0) < tol.phase


def projector(theta, outcome):
    """Eigenprojector of ``pauli_axis(theta)`` for eigenvalue ``outcome``."""
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")
    return 0.5 * (IDENTITY2 + outcome * pauli_axis(theta))


class Collapse(NamedTuple):
    probability: float
    post_state: Optional[np.ndarray]

    @property
    def possible(self):
        return self.post_state is not None


def project_and_collapse(rho, theta, outcome, tol: Tolerances = TOL):
    """Projective measurement of ``pauli_axis(theta)`` on a single spin.

    Returns ``Collapse(probability, post_state)``. An outcome whose probability
    is below ``tol.impossible`` comes back with ``post_state=None``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError("project_and_collapse acts on a single spin")
    p = projector(theta, outcome)
    prob = float(expectation(p, rho).real)
    if prob < tol.impossible:
        return Collapse(max(prob, 0.0), None)
    post = p @ rho @ p / prob
    return Collapse(prob, _frozen(post))


def partial_trace_first(rho4):
    """Reduced state of the second spin of a two-spin density matrix."""
    rho4 = np.asarray(rho4, dtype=complex)
    if rho4.shape != (4, 4):
        raise DimensionError("expected a 4x4 density matrix")
    return np.einsum("ijik->jk", rho4.reshape(2, 2, 2, 2))
