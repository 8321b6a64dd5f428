"""Discrete joint distributions over +/-1 outcomes.

Canonical ordering (shared by every module and by the CLI output): entry
``k`` of a joint over ``n`` variables is the sign pattern obtained by reading
``k`` as an ``n``-bit binary number, most significant bit = variable 0, with
bit 0 meaning +1 and bit 1 meaning -1. For n = 2 the order is
(++, +-, -+, --).
"""

import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from .tolerances import TOL


class ZeroProbabilityError(ValueError):
    """Conditioning on an event of probability zero."""


class InvalidDistributionError(ValueError):
    pass


def sign_patterns(n):
    """All sign patterns of length ``n`` in canonical order."""
    return list(itertools.product((1, -1), repeat=n))


def pattern_index(pattern):
    k = 0
    for s in pattern:
        if s not in (1, -1):
            raise ValueError(f"outcomes are +1/-1, got {s!r}")
        k = 2 * k + (0 if s == 1 else 1)
    return k


def _check_outcome(v):
    if v not in (1, -1):
        raise ValueError(f"outcomes are +1/-1, got {v!r}")
    return v


@dataclass(frozen=True)
class JointDistribution:
    """Probability vector over sign patterns in canonical order.

    ``signed=True`` admits negative entries (a quasi-distribution, e.g. a
    joint reconstructed from moments that admits no real distribution);
    totals are still checked.
    """

    n: int
    p: tuple
    signed: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.n not in (2, 3, 4):
            raise InvalidDistributionError(f"n must be 2, 3 or 4, got {self.n}")
        p = np.asarray(self.p, dtype=float)
        if p.shape != (2 ** self.n,):
            raise InvalidDistributionError(f"expected {2 ** self.n} entries, got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise InvalidDistributionError("non-finite probability")
        if not self.signed and np.min(p) < -TOL.clamp:
            raise InvalidDistributionError(f"negative probability {np.min(p)!r}")
        if abs(p.sum() - 1.0) > TOL.prob_sum:
            raise InvalidDistributionError(f"probabilities sum to {p.sum()!r}")
        object.__setattr__(self, "p", tuple(float(x) for x in p))

    @classmethod
    def from_table(cls, table: Mapping[tuple, float]):
        """Build from a ``{sign_pattern: probability}`` mapping; missing patterns are 0."""
        n = len(next(iter(table)))
        p = np.zeros(2 ** n)
        for pattern, prob in table.items():
            p[pattern_index(pattern)] = prob
        return cls(n, tuple(p))

    @property
    def probs(self):
        """Entries with construction noise clamped to zero (raw if signed)."""
        p = np.asarray(self.p)
        return p if self.signed else np.clip(p, 0.0, None)

    def tensor(self):
        return self.probs.reshape((2,) * self.n)

    def prob(self, event: Mapping[int, int]):
        """P(all variables in ``event`` take the given values)."""
        t = self.tensor()
        idx = tuple(slice(None) if i not in event else (0 if _check_outcome(event[i]) == 1 else 1)
                    for i in range(self.n))
        return float(np.sum(t[idx]))

    def marginal(self, keep):
        keep = tuple(keep)
        drop = tuple(i for i in range(self.n) if i not in keep)
        m = self.tensor().sum(axis=drop)
        order = sorted(keep)
        m = np.moveaxis(m, [order.index(k) for k in keep], range(len(keep)))
        return m

    def moment(self, variables):
        """E[prod_{i in variables} s_i] by contraction with the sign vector."""
        t = self.tensor()
        signs = np.array([1.0, -1.0])
        for axis in reversed(range(self.n)):
            w = signs if axis in variables else np.ones(2)
            t = np.tensordot(t, w, axes=([axis], [0]))
        return float(t)

    def to_json(self):
        return json.dumps({"n": self.n, "p": list(self.p)})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(int(d["n"]), tuple(d["p"]))


def uniform(n):
    return JointDistribution(n, tuple(np.full(2 ** n, 2.0 ** -n)))


def product_of_bits(*p_plus):
    """Independent variables with P(s_i = +1) = p_plus[i]."""
    p = np.array([1.0])
    for q in p_plus:
        p = np.kron(p, [q, 1.0 - q])
    return JointDistribution(len(p_plus), tuple(p))


def coin_machine():
    """Two coins dealt so that they always show opposite faces.

    Variable 0 is coin A, variable 1 is coin B; face "1" maps to +1 and face
    "0" to -1.
    """
    return JointDistribution.from_table({(1, -1): 0.5, (-1, 1): 0.5})


def single_average(joint, i):
    return joint.moment({i})


def pairwise_correlation(joint, i, j):
    return joint.moment({i, j})


def triple_correlation(joint):
    if joint.n != 3:
        raise ValueError("triple correlation is defined for three variables only")
    return joint.moment({0, 1, 2})


def conditional(joint, target_var, target_val, given_var, given_val):
    """P(target_var = target_val | given_var = given_val)."""
    p_given = joint.prob({given_var: given_val})
    if p_given <= 0.0:
        raise ZeroProbabilityError(f"P(s{given_var}={given_val}) = 0")
    if target_var == given_var:
        return 1.0 if target_val == given_val else 0.0
    return joint.prob({target_var: target_val, given_var: given_val}) / p_given


class CompletenessCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def completeness_check(joint, y_var, y_val=1):
    """Total probability: P(y) against sum_x P(x) P(y|x).

    The partition {x} is every sign pattern of the remaining variables;
    zero-probability cells contribute nothing.
    """
    others = [i for i in range(joint.n) if i != y_var]
    lhs = joint.prob({y_var: y_val})
    rhs = 0.0
    for pattern in itertools.product((1, -1), repeat=len(others)):
        x = dict(zip(others, pattern))
        px = joint.prob(x)
        if px <= 0.0:
            continue
        rhs += px * (joint.prob({**x, y_var: y_val}) / px)
    return CompletenessCheck(lhs, rhs, abs(lhs - rhs) < TOL.feasibility)


class FactorisationCheck(NamedTuple):
    p_ab: float
    p_a_p_b: float
    factorises: bool


def factorisation_check(joint, a_event: Mapping[int, int], b_event: Mapping[int, int]):
    """Compare P(A, B) with P(A) P(B) for two events given as ``{var: value}``."""
    overlap = set(a_event) & set(b_event)
    if any(a_event[k] != b_event[k] for k in overlap):
        p_ab = 0.0
    else:
        p_ab = joint.prob({**a_event, **b_event})
    p_a_p_b = joint.prob(a_event) * joint.prob(b_event)
    return FactorisationCheck(p_ab, p_a_p_b, abs(p_ab - p_a_p_b) < TOL.feasibility)
