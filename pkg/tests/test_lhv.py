import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bellseq import inequalities as iq
from bellseq import lhv

from conftest import angles

integrate = pytest.importorskip("scipy.integrate")

PLANAR_SAME = lhv.LhvModel("planar", "same_spin")
PLANAR_ANTI = lhv.LhvModel("planar", "anti_pair")
SPHERE_SAME = lhv.LhvModel("spherical", "same_spin")
SPHERE_ANTI = lhv.LhvModel("spherical", "anti_pair")


def test_outcomes():
    s = lhv.HiddenState("planar", 0.3)
    assert lhv.lhv_outcome(s, 0.3) == 1
    assert lhv.lhv_outcome(s, 0.3 + np.pi) == -1
    # lambda orthogonal to the axis resolves to +1
    assert lhv.lhv_outcome(lhv.HiddenState("planar", 0.0), np.pi / 2) == 1
    v = lhv.HiddenState("spherical", (0.0, 1.0, 0.0))
    assert lhv.lhv_outcome(v, lhv.axis_vector(1.1)) == 1
    assert lhv.lhv_outcome(lhv.HiddenState("spherical", (0, 0, 1)), (0, 0, -1)) == -1


def test_hidden_state_validation():
    with pytest.raises(ValueError):
        lhv.HiddenState("spherical", (1.0, 1.0, 0.0))
    with pytest.raises(ValueError):
        lhv.lhv_outcome(lhv.HiddenState("planar", 0.0), (0, 0, 1))
    with pytest.raises(ValueError):
        lhv.lhv_outcome(lhv.HiddenState("spherical", (0, 0, 1)), 0.5)
    with pytest.raises(ValueError):
        lhv.LhvModel("cubic")


def test_model_names():
    assert PLANAR_ANTI.name == "lhv_planar_anti_pair"
    assert SPHERE_SAME.name == "lhv_spherical_same_spin"


def planar_quad(theta, phi):
    """(1/2pi) integral of sign(cos(theta - l)) sign(cos(phi - l)) over the circle."""
    f = lambda l: np.sign(np.cos(theta - l)) * np.sign(np.cos(phi - l))
    cuts = sorted(np.mod([theta + np.pi / 2, theta - np.pi / 2, phi + np.pi / 2, phi - np.pi / 2], 2 * np.pi))
    edges = [0.0] + list(cuts) + [2 * np.pi]
    total = sum(integrate.quad(f, a, b)[0] for a, b in zip(edges, edges[1:]) if b > a)
    return total / (2 * np.pi)


def sphere_grid(theta, phi, n=400):
    """Midpoint rule in (cos polar, azimuth), i.e. uniform on the sphere."""
    cz = -1 + (np.arange(n) + 0.5) * 2 / n
    az = (np.arange(2 * n) + 0.5) * np.pi / n
    cz, az = np.meshgrid(cz, az, indexing="ij")
    sz = np.sqrt(1 - cz ** 2)
    lam = np.stack([sz * np.cos(az), sz * np.sin(az), cz], axis=-1)
    a = np.where(lam @ lhv.axis_vector(theta) >= 0, 1, -1)
    b = np.where(lam @ lhv.axis_vector(phi) >= 0, 1, -1)
    return float((a * b).mean())


@pytest.mark.parametrize("theta,phi", [(0.0, 0.0), (0.0, 1.0), (0.3, 2.9), (5.0, 0.2), (1.0, 1.0 + np.pi)])
def test_exact_vs_quadrature(theta, phi):
    assert lhv.lhv_correlation_exact(PLANAR_SAME, theta, phi) == pytest.approx(planar_quad(theta, phi), abs=1e-6)


@pytest.mark.parametrize("theta,phi", [(0.0, 0.7), (0.4, 2.5), (1.0, 1.0 + np.pi)])
def test_exact_vs_sphere_grid(theta, phi):
    assert lhv.lhv_correlation_exact(SPHERE_SAME, theta, phi) == pytest.approx(sphere_grid(theta, phi), abs=5e-3)


def test_sixty_degrees():
    assert lhv.lhv_correlation_exact(PLANAR_ANTI, 0.0, np.pi / 3) == pytest.approx(-1 / 3, abs=1e-15)
    assert lhv.lhv_correlation_exact(PLANAR_SAME, 0.0, np.pi / 3) == pytest.approx(1 / 3, abs=1e-15)


@given(angles, angles)
def test_exact_is_the_linear_source(theta, phi):
    assert lhv.lhv_correlation_exact(PLANAR_ANTI, theta, phi) == pytest.approx(iq.lhv_linear_corr(theta, phi), abs=1e-12)
    assert -1 <= lhv.lhv_correlation_exact(SPHERE_SAME, theta, phi) <= 1


@pytest.mark.parametrize("model", [PLANAR_ANTI, SPHERE_ANTI, PLANAR_SAME, SPHERE_SAME])
def test_mc_close_to_exact(model):
    r = lhv.lhv_correlation_mc(model, 0.2, 1.3, 200_000, seed=5)
    assert r.value.real == pytest.approx(lhv.lhv_correlation_exact(model, 0.2, 1.3), abs=0.005)
    assert r.samples == 200_000 and r.method == "sampled" and r.scenario == model.name


def test_mc_deterministic_and_thread_independent():
    a = lhv.lhv_correlation_mc(SPHERE_ANTI, 0.0, 1.0, 150_000, seed=9, workers=1)
    b = lhv.lhv_correlation_mc(SPHERE_ANTI, 0.0, 1.0, 150_000, seed=9, workers=4)
    assert a == b
    c = lhv.lhv_correlation_mc(SPHERE_ANTI, 0.0, 1.0, 150_000, seed=10)
    assert c.value != a.value


def test_mc_coverage():
    rng = np.random.default_rng(11)
    deltas = rng.uniform(0, np.pi, 4)
    hits = total = 0
    for d in deltas:
        exact = lhv.lhv_correlation_exact(PLANAR_SAME, 0.0, d)
        for seed in range(50):
            r = lhv.lhv_correlation_mc(PLANAR_SAME, 0.0, d, 20_000, seed)
            hits += abs(r.value.real - exact) <= 5 * max(r.stderr, 1e-12)
            total += 1
    assert hits >= 0.99 * total


def test_mc_count_check():
    with pytest.raises(ValueError):
        lhv.lhv_correlation_mc(PLANAR_ANTI, 0, 1, 0, seed=0)


@pytest.mark.parametrize("family", ["bell_canonical", "chsh"])
def test_exact_model_never_violates(family):
    corr = lambda a, b: lhv.lhv_correlation_exact(PLANAR_ANTI, a, b)
    assert iq.grid_extremum(family, corr, np.deg2rad(10))[1] <= 1e-12


@given(st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
def test_separation_range(a, b):
    d = lhv.separation(a, b)
    assert 0 <= d <= math.pi + 1e-15
    assert lhv.separation(b, a) == pytest.approx(d, abs=1e-12)
