"""Correlation functions for the three experiment families.

* ``bell_pair``: a singlet shared by two sites measuring axes theta and phi.
* ``sequential_chain``: one spin measured on theta, then (after collapse) on phi.
* ``product_pair``: two independent spins, each polarised along its own
  reference axis, measured at theta and phi from that axis.

plus three-step sequential chains and the operator triple correlator. Every
family has an exact path (operator algebra or exhaustive enumeration of
outcome paths) and a seeded sampling path.

All angles are radians.
"""

import csv
import enum
import io
import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import spinalg as sa
from .tolerances import TOL


class Scenario(str, enum.Enum):
    BELL_PAIR = "bell_pair"
    SEQUENTIAL_CHAIN = "sequential_chain"
    PRODUCT_PAIR = "product_pair"
    TRIPLE_OPERATOR = "triple_operator"
    TRIPLE_CHAIN = "triple_chain"


N_ANGLES = {
    Scenario.BELL_PAIR: 2,
    Scenario.SEQUENTIAL_CHAIN: 2,
    Scenario.PRODUCT_PAIR: 2,
    Scenario.TRIPLE_OPERATOR: 3,
    Scenario.TRIPLE_CHAIN: 3,
}


def _jsonable_value(value):
    value = complex(value)
    return {"re": value.real, "im": value.imag}


@dataclass(frozen=True)
class CorrelationRecord:
    scenario: str
    angles: tuple
    value: complex
    method: str = "exact"
    samples: Optional[int] = None
    seed: Optional[int] = None
    stderr: Optional[float] = None

    def to_dict(self):
        d = {
            "scenario": self.scenario,
            "angles": list(self.angles),
            "value": _jsonable_value(self.value),
            "method": self.method,
            "samples": self.samples,
            "seed": self.seed,
        }
        if self.stderr is not None:
            d["stderr"] = self.stderr
        return d

    def to_json(self):
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class SampleBatch:
    scenario: str
    angles: tuple
    seed: int
    count: int
    outcomes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.count < 1 or len(self.outcomes) != self.count:
            raise ValueError("sample batch must be nonempty and match its count")
        self.outcomes.flags.writeable = False

    def to_dict(self):
        return {
            "scenario": self.scenario,
            "angles": list(self.angles),
            "seed": self.seed,
            "count": self.count,
            "outcomes": self.outcomes.tolist(),
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"s{i + 1}" for i in range(self.outcomes.shape[1])])
        w.writerows(self.outcomes.tolist())
        return buf.getvalue()


# -- entangled pair ---------------------------------------------------------

def _singlet_rho():
    psi = sa.singlet()
    return np.outer(psi, np.conj(psi))


def bell_correlation(theta, phi):
    """<psi| sigma_theta (x) sigma_phi |psi> for the singlet, by 4x4 algebra.

    Broadcasts over array-valued angles.
    """
    op = sa.tensor(sa.pauli_axis(theta), sa.pauli_axis(phi))
    value = sa.expectation(op, _singlet_rho()).real
    return float(value) if np.ndim(value) == 0 else value


def bell_conditional(theta, phi, a_outcome, b_outcome):
    """P(B = b_outcome on phi | A = a_outcome on theta) for the singlet."""
    rho = _singlet_rho()
    pa = sa.tensor(sa.projector(theta, a_outcome), sa.IDENTITY2)
    p_a = float(sa.expectation(pa, rho).real)
    if p_a < TOL.impossible:
        raise ValueError("conditioning outcome has zero probability")
    rho_b = sa.partial_trace_first(pa @ rho @ pa / p_a)
    return sa.project_and_collapse(rho_b, phi, b_outcome).probability


def _pair_distribution(psi, theta, phi):
    rho = np.outer(psi, np.conj(psi))
    out = []
    for a, b in itertools.product((1, -1), repeat=2):
        op = sa.tensor(sa.projector(theta, a), sa.projector(phi, b))
        out.append(float(sa.expectation(op, rho).real))
    return np.array(out)


# -- sequential measurements on one spin ------------------------------------

def sequential_conditional(rho, theta, phi, first, second):
    """P(second on phi | first on theta) for successive measurements of one spin."""
    c = sa.project_and_collapse(rho, theta, first)
    if not c.possible:
        raise ValueError("conditioning outcome has zero probability")
    return sa.project_and_collapse(c.post_state, phi, second).probability


def sequential_correlation_operator(rho, theta, phi):
    """Tr(sigma_phi sigma_theta rho), complex in general."""
    return complex(sa.expectation(sa.pauli_axis(phi) @ sa.pauli_axis(theta), rho))


def chain_distribution(rho, angles):
    """Exact outcome distribution of successive projective measurements.

    Returns an array over sign patterns (canonical order, first measurement
    most significant). Paths through an impossible outcome get probability 0.
    """
    angles = list(angles)
    probs = np.zeros(2 ** len(angles))
    for k, pattern in enumerate(itertools.product((1, -1), repeat=len(angles))):
        state, p = rho, 1.0
        for theta, s in zip(angles, pattern):
            c = sa.project_and_collapse(state, theta, s)
            p *= c.probability
            if not c.possible:
                p = 0.0
                break
            state = c.post_state
        probs[k] = p
    return probs


def _product_moment(probs, n):
    signs = np.array([np.prod(p) for p in itertools.product((1, -1), repeat=n)])
    return float(signs @ probs)


def sequential_correlation_chain(rho, theta, phi):
    """sum_{s1,s2} s1 s2 P(s1 on theta) P(s2 on phi | s1 on theta)."""
    return _product_moment(chain_distribution(rho, (theta, phi)), 2)


class EquivalenceReport(NamedTuple):
    c_ab: float
    c_bb: float
    matches: bool
    max_conditional_gap: float


def equivalence_report(theta, phi):
    """Compare the singlet cross-correlation with the single-spin chain.

    The chain runs on B's reduced state I/2. Besides the correlation-level
    identity c_bb = -c_ab this checks, for every s and t,
    P(B_t on phi | A_{-s} on theta) = P(B_t on phi | B_s on theta).
    """
    c_ab = bell_correlation(theta, phi)
    c_bb = sequential_correlation_chain(sa.MAXIMALLY_MIXED, theta, phi)
    gap = 0.0
    for s, t in itertools.product((1, -1), repeat=2):
        bell = bell_conditional(theta, phi, -s, t)
        seq = sequential_conditional(sa.MAXIMALLY_MIXED, theta, phi, s, t)
        gap = max(gap, abs(bell - seq))
    matches = abs(c_ab + c_bb) < TOL.feasibility and gap < TOL.feasibility
    return EquivalenceReport(c_ab, c_bb, matches, gap)


# -- independent product pair -----------------------------------------------

def product_pair_probabilities(theta, phi):
    """(P_eq, P_diff) for two independent spins measured theta, phi off their polarisation."""
    c1, s1 = np.cos(theta / 2) ** 2, np.sin(theta / 2) ** 2
    c2, s2 = np.cos(phi / 2) ** 2, np.sin(phi / 2) ** 2
    return c1 * c2 + s1 * s2, c1 * s2 + s1 * c2


def product_correlation(theta, phi):
    p_eq, p_diff = product_pair_probabilities(theta, phi)
    return p_eq - p_diff


def product_correlation_expanded(theta, phi):
    """cos(phi - theta) minus the absolute-angle correction term."""
    return (np.cos(phi - theta)
            - 4 * np.cos(theta / 2) * np.cos(phi / 2) * np.sin(theta / 2) * np.sin(phi / 2))


def product_correlation_simplified(theta, phi):
    return np.cos(theta) * np.cos(phi)


def _product_psi():
    up = np.array([1.0, 0.0], dtype=complex)
    return sa.tensor(up, up)


def product_amplitudes(theta, phi):
    """Amplitudes of the product state in the (theta, phi) measurement basis.

    Basis order (up_theta up_phi, up_theta down_phi, down_theta up_phi,
    down_theta down_phi); each spin is up along its own reference axis.
    """
    ut, dt = sa.axis_eigenstates(theta)
    up, dp = sa.axis_eigenstates(phi)
    u_theta = np.column_stack([ut, dt])
    u_phi = np.column_stack([up, dp])
    basis = sa.tensor(u_theta, u_phi)
    return sa.dagger(basis) @ _product_psi()


def product_expansion_terms(theta, phi):
    """Split each expansion coefficient into (relative, absolute) parts.

    The relative parts depend on phi - theta only, the absolute parts on
    phi + theta. Same basis order as :func:`product_amplitudes`.
    """
    d = 0.5 * (phi - theta)
    m = 0.5 * (phi + theta)
    relative = np.array([np.cos(d), -np.sin(d), np.sin(d), np.cos(d)])
    absolute = np.array([-np.sin(m), np.cos(m), np.cos(m), np.sin(m)])
    return relative, absolute


def cull_relative_terms(theta, phi):
    """Keep only the difference-dependent parts of the expansion, renormalised."""
    relative, _ = product_expansion_terms(theta, phi)
    norm = np.linalg.norm(relative)
    if norm < TOL.eq:
        raise ValueError("culled state has zero norm")
    return sa.state_vector(relative / norm)


_PAIR_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])


def culled_correlation(theta, phi, anti=False):
    """E[s1 s2] of the culled state in the (theta, phi) basis.

    ``anti=True`` reads the second spin with reversed outcome labels, which
    turns cos(phi - theta) into the singlet form -cos(phi - theta).
    """
    weights = np.abs(cull_relative_terms(theta, phi)) ** 2
    value = float(_PAIR_SIGNS @ weights)
    return -value if anti else value


# -- three measurements -----------------------------------------------------

def triple_operator_correlator(rho, t1, t2, t3):
    """Tr(sigma_t3 sigma_t2 sigma_t1 rho)."""
    op = sa.pauli_axis(t3) @ sa.pauli_axis(t2) @ sa.pauli_axis(t1)
    return complex(sa.expectation(op, rho))


def triple_chain_correlation(rho, t1, t2, t3, order=(0, 1, 2)):
    """E[s1 s2 s3] over a three-step measurement chain.

    ``order`` lists the (0-based) indices of (t1, t2, t3) in the order they
    are measured; s_i always refers to the outcome on t_i.
    """
    if sorted(order) != [0, 1, 2]:
        raise ValueError(f"order must be a permutation of (0, 1, 2), got {order!r}")
    angles = (t1, t2, t3)
    return _product_moment(chain_distribution(rho, [angles[i] for i in order]), 3)


# -- exact records and sampling ---------------------------------------------

def _angles_for(scenario, angles):
    angles = tuple(float(a) for a in angles)
    if len(angles) != N_ANGLES[scenario]:
        raise ValueError(f"{scenario.value} takes {N_ANGLES[scenario]} angles, got {len(angles)}")
    return angles


def _default_rho(scenario):
    return sa.UP_Z if scenario is Scenario.TRIPLE_CHAIN else sa.MAXIMALLY_MIXED


def exact_correlation(scenario, angles, rho=None):
    scenario = Scenario(scenario)
    angles = _angles_for(scenario, angles)
    rho = _default_rho(scenario) if rho is None else rho
    if scenario is Scenario.BELL_PAIR:
        value = bell_correlation(*angles)
    elif scenario is Scenario.SEQUENTIAL_CHAIN:
        value = sequential_correlation_chain(rho, *angles)
    elif scenario is Scenario.PRODUCT_PAIR:
        value = product_correlation(*angles)
    elif scenario is Scenario.TRIPLE_OPERATOR:
        value = triple_operator_correlator(rho, *angles)
    else:
        value = triple_chain_correlation(rho, *angles)
    return CorrelationRecord(scenario.value, angles, complex(value), "exact")


def outcome_distribution(scenario, angles, rho=None):
    """Exact probabilities of each outcome tuple (canonical order)."""
    scenario = Scenario(scenario)
    angles = _angles_for(scenario, angles)
    rho = _default_rho(scenario) if rho is None else rho
    if scenario is Scenario.BELL_PAIR:
        return _pair_distribution(sa.singlet(), *angles)
    if scenario is Scenario.PRODUCT_PAIR:
        return _pair_distribution(_product_psi(), *angles)
    if scenario in (Scenario.SEQUENTIAL_CHAIN, Scenario.TRIPLE_CHAIN):
        return chain_distribution(rho, angles)
    raise ValueError(f"{scenario.value} has no outcome distribution to sample")


CHUNK = 1 << 16


def chunk_rng(seed, index):
    """Generator for chunk ``index`` of a seeded stream."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def chunked(count, fn, workers=None):
    """Evaluate ``fn(chunk_index, size)`` over fixed-size chunks, in order."""
    sizes = [min(CHUNK, count - start) for start in range(0, count, CHUNK)]
    jobs = list(enumerate(sizes))
    if workers and workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(lambda j: fn(*j), jobs))
    return [fn(i, m) for i, m in jobs]


def sample(scenario, angles, count, seed, rho=None, workers=None):
    """Draw ``count`` i.i.d. outcome tuples; a pure function of its arguments."""
    scenario = Scenario(scenario)
    if count < 1:
        raise ValueError("count must be >= 1")
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    angles = _angles_for(scenario, angles)
    probs = outcome_distribution(scenario, angles, rho)
    cdf = np.cumsum(probs / probs.sum())
    n = N_ANGLES[scenario]
    patterns = np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int8)

    def draw(index, size):
        u = chunk_rng(seed, index).random(size)
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)
        return patterns[idx]

    outcomes = np.concatenate(chunked(count, draw, workers))
    return SampleBatch(scenario.value, angles, int(seed), int(count), outcomes)


def estimate(batch: SampleBatch):
    prod = np.prod(batch.outcomes.astype(np.int64), axis=1)
    value = float(prod.mean())
    stderr = float(prod.std() / np.sqrt(batch.count))
    return CorrelationRecord(batch.scenario, batch.angles, complex(value), "sampled",
                             batch.count, batch.seed, stderr)
