import numpy as np
import pytest
from hypothesis import settings, strategies as st

from bellseq import spinalg as sa

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

angles = st.floats(min_value=-4 * np.pi, max_value=4 * np.pi, allow_nan=False, allow_infinity=False)


@st.composite
def bloch_vectors(draw, plane=False):
    """Bloch vectors inside the unit ball; ``plane=True`` keeps y = 0."""
    r = draw(st.floats(0.0, 1.0))
    polar = draw(st.floats(0.0, np.pi))
    az = 0.0 if plane else draw(st.floats(0.0, 2 * np.pi))
    return r * np.sin(polar) * np.cos(az), r * np.sin(polar) * np.sin(az), r * np.cos(polar)


@st.composite
def density_matrices(draw, plane=False):
    return sa.bloch_state(*draw(bloch_vectors(plane)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_rho(rng, pure=False, plane=False):
    v = rng.normal(size=3)
    if plane:
        v[1] = 0.0
    v /= np.linalg.norm(v)
    r = 1.0 if pure else rng.uniform(0, 1)
    return sa.bloch_state(*(r * v))


@pytest.fixture
def make_rho(rng):
    return lambda pure=False, plane=False: random_rho(rng, pure, plane)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip("ab:"))):
            terminalreporter.write_line(line)
