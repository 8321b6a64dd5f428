"""Deterministic sign(n . lambda) hidden-variable models.

A shared hidden variable lambda (a planar angle, or a unit vector on the
sphere) fixes every outcome: measuring axis n gives sign(n . lambda), with a
zero inner product resolving to +1. ``same_spin`` compares the outcomes of
two axes for the same lambda; ``anti_pair`` negates the second party's
outcome, mimicking the singlet's matching-axis anti-correlation.

For uniformly distributed lambda both geometries give the linear correlation
1 - 2 Delta / pi (``same_spin``), Delta being the angle between the axes.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .scenarios import CorrelationRecord, chunk_rng, chunked


class Geometry(str, enum.Enum):
    PLANAR = "planar"
    SPHERICAL = "spherical"


class Pairing(str, enum.Enum):
    SAME_SPIN = "same_spin"
    ANTI_PAIR = "anti_pair"


@dataclass(frozen=True)
class HiddenState:
    geometry: Geometry
    lam: object  # planar angle or unit 3-vector

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        if self.geometry is Geometry.SPHERICAL:
            v = np.asarray(self.lam, dtype=float)
            if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ValueError("spherical hidden state must be a unit 3-vector")
            object.__setattr__(self, "lam", tuple(v))
        else:
            object.__setattr__(self, "lam", float(np.mod(self.lam, 2 * np.pi)))


@dataclass(frozen=True)
class LhvModel:
    geometry: Geometry = Geometry.PLANAR
    pairing: Pairing = Pairing.ANTI_PAIR

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        object.__setattr__(self, "pairing", Pairing(self.pairing))

    @property
    def name(self):
        return f"lhv_{self.geometry.value}_{self.pairing.value}"


def axis_vector(theta):
    """Unit vector of an x-z plane axis, angle from +z towards +x."""
    return np.array([np.sin(theta), 0.0, np.cos(theta)])


def _sign(x):
    return np.where(x >= 0, 1, -1)


def lhv_outcome(state: HiddenState, axis):
    """+1/-1 outcome of measuring ``axis`` (angle if planar, 3-vector if spherical)."""
    if state.geometry is Geometry.PLANAR:
        if np.ndim(axis) != 0:
            raise ValueError("planar hidden state needs an angle axis")
        return int(_sign(np.cos(axis - state.lam)))
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,):
        raise ValueError("spherical hidden state needs a 3-vector axis")
    return int(_sign(axis @ np.asarray(state.lam)))


def separation(theta, phi):
    """Angle between two planar axes, folded into [0, pi]."""
    return np.abs(np.mod(np.subtract(theta, phi) + np.pi, 2 * np.pi) - np.pi)


def lhv_correlation_exact(model: LhvModel, theta, phi):
    c = 1.0 - 2.0 * separation(theta, phi) / np.pi
    return -c if model.pairing is Pairing.ANTI_PAIR else c


def _draw_products(model, theta, phi, rng, size):
    if model.geometry is Geometry.PLANAR:
        lam = rng.uniform(0.0, 2 * np.pi, size)
        a = _sign(np.cos(theta - lam))
        b = _sign(np.cos(phi - lam))
    else:
        # inverse-CDF: uniform azimuth, uniform cos(polar)
        az = rng.uniform(0.0, 2 * np.pi, size)
        cz = rng.uniform(-1.0, 1.0, size)
        sz = np.sqrt(1.0 - cz * cz)
        lam = np.stack([sz * np.cos(az), sz * np.sin(az), cz], axis=1)
        a = _sign(lam @ axis_vector(theta))
        b = _sign(lam @ axis_vector(phi))
    if model.pairing is Pairing.ANTI_PAIR:
        b = -b
    return (a * b).astype(np.int64)


def lhv_correlation_mc(model: LhvModel, theta, phi, count, seed, workers=None):
    """Monte Carlo estimate over ``count`` hidden states; a pure function of its inputs."""
    if count < 1:
        raise ValueError("count must be >= 1")
    parts = chunked(count, lambda i, m: _draw_products(model, theta, phi, chunk_rng(seed, i), m), workers)
    prod = np.concatenate(parts)
    value = float(prod.mean())
    stderr = float(prod.std() / np.sqrt(count))
    return CorrelationRecord(model.name, (float(theta), float(phi)), complex(value),
                             "sampled", int(count), int(seed), stderr)
