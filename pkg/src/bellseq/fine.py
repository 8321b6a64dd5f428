"""Joint-distribution feasibility for measured marginals.

Three settings: the joint over (s1, s2, s3) with given single averages B_i,
pair correlations C_ij and triple correlation D is

    p(s) = (1 + sum_i B_i s_i + sum_{i<j} C_ij s_i s_j + D s1 s2 s3) / 8.

D is never measured, so the question is whether *some* D makes every entry
non-negative. Each sign pattern bounds D from one side, which gives a closed
interval (possibly empty) of admissible D.

Four settings (CHSH: a, a' at one site, b, b' at the other): a 16-entry joint
over (s_a, s_a', s_b, s_b') with zero single averages and the four measured
cross correlations; existence is decided by a phase-1 simplex.
"""

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import inequalities, scenarios
from .errors import InvariantViolation
from .probcore import JointDistribution, sign_patterns
from .simplex import lp_feasibility
from .tolerances import TOL

PAIRS3 = ((0, 1), (0, 2), (1, 2))
# CHSH variables are ordered (a, a', b, b'); measured pairs in input order
CHSH_PAIRS = ((0, 2), (0, 3), (1, 2), (1, 3))


@dataclass(frozen=True)
class MarginalSet:
    """Single averages ``B``, pair correlations ``C`` and optional triple ``D``.

    n = 3: ``C = (C12, C13, C23)``. n = 4: ``C = (c_ab, c_ab', c_a'b, c_a'b')``
    over variables (a, a', b, b').
    """

    n: int
    B: tuple
    C: tuple
    D: Optional[float] = None

    def __post_init__(self):
        if self.n not in (3, 4):
            raise ValueError("marginal sets cover 3 or 4 settings")
        object.__setattr__(self, "B", tuple(float(x) for x in self.B))
        object.__setattr__(self, "C", tuple(float(x) for x in self.C))
        if len(self.B) != self.n:
            raise ValueError(f"need {self.n} single averages")
        n_pairs = 3 if self.n == 3 else 4
        if len(self.C) != n_pairs:
            raise ValueError(f"need {n_pairs} pair correlations")
        if self.D is not None and self.n != 3:
            raise ValueError("a triple correlation only exists for n = 3")
        values = self.B + self.C + (() if self.D is None else (self.D,))
        if any(abs(v) > 1.0 + 1e-12 for v in values):
            raise ValueError(f"marginals must lie in [-1, 1]: {values}")

    def pairs(self):
        return PAIRS3 if self.n == 3 else CHSH_PAIRS

    def to_dict(self):
        return {"n": self.n, "B": list(self.B), "C": list(self.C), "D": self.D}


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    marginals: MarginalSet
    d_interval: Optional[tuple] = None
    witness: Optional[JointDistribution] = None
    # infeasible n = 3: (pattern bounding D from below, pattern bounding D from above)
    certificate: Optional[tuple] = None
    bell_violated: Optional[bool] = None
    bell_violated_literal: Optional[bool] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        d = {
            "feasible": self.feasible,
            "marginals": self.marginals.to_dict(),
            "d_interval": None if self.d_interval is None else list(self.d_interval),
            "witness": None if self.witness is None else {"n": self.witness.n, "p": list(self.witness.p)},
            "certificate": None if self.certificate is None else [list(c) for c in self.certificate],
        }
        if self.bell_violated is not None:
            d["bell_violated"] = self.bell_violated
            d["bell_violated_literal"] = self.bell_violated_literal
        d.update(self.extra)
        return d

    def to_json(self):
        return json.dumps(self.to_dict())


def _offset_terms(m, pattern):
    """1 + sum B_i s_i + sum C_ij s_i s_j for one sign pattern."""
    value = 1.0 + sum(b * s for b, s in zip(m.B, pattern))
    for c, (i, j) in zip(m.C, m.pairs()):
        value += c * pattern[i] * pattern[j]
    return value


def joint_from_marginals(m: MarginalSet, d):
    """The 8-entry (possibly signed) joint for triple correlation ``d``."""
    if m.n != 3:
        raise ValueError("joint_from_marginals is the three-setting construction")
    p = [(_offset_terms(m, s) + d * s[0] * s[1] * s[2]) / 8.0 for s in sign_patterns(3)]
    return JointDistribution(3, tuple(p), signed=True)


def _d_bounds(m):
    lo, hi = -np.inf, np.inf
    lo_pat = hi_pat = None
    for s in sign_patterns(3):
        a = _offset_terms(m, s)
        if s[0] * s[1] * s[2] > 0:   # D >= -a
            if -a > lo:
                lo, lo_pat = -a, s
        elif a < hi:                  # D <= a
            hi, hi_pat = a, s
    return lo, hi, lo_pat, hi_pat


def d_interval(m: MarginalSet, tol=TOL.feasibility):
    """Closed interval of triple correlations giving a non-negative joint, or None.

    Endpoints crossing by less than ``tol`` collapse to their midpoint.
    """
    lo, hi, _, _ = _d_bounds(m)
    if lo > hi + tol:
        return None
    if lo > hi:
        lo = hi = 0.5 * (lo + hi)
    return (float(lo), float(hi))


def counterfactual_marginals(t1, t2, t3):
    """One party's same-spin moments: C_ij = cos(t_i - t_j), zero averages.

    These are the singlet cross correlations with the sign flipped (B's
    outcome stands in for A's counterfactual outcome on the same axis).
    """
    t = (t1, t2, t3)
    c = tuple(-scenarios.bell_correlation(t[i], t[j]) for i, j in PAIRS3)
    return MarginalSet(3, (0.0, 0.0, 0.0), c)


def feasibility3(m: MarginalSet, tol=TOL.feasibility):
    interval = d_interval(m, tol)
    if interval is None:
        _, _, lo_pat, hi_pat = _d_bounds(m)
        return FeasibilityReport(False, m, certificate=(lo_pat, hi_pat))
    d = 0.5 * (interval[0] + interval[1])
    signed = joint_from_marginals(m, d)
    witness = JointDistribution(3, tuple(np.clip(signed.p, 0.0, None) / np.clip(signed.p, 0.0, None).sum()))
    return FeasibilityReport(True, m, d_interval=interval, witness=witness)


def fine_check(t1, t2, t3):
    """Joint feasibility of the counterfactual triple vs Bell's inequality.

    ``bell_violated`` is Bell's form over every relabelling of the three axes
    (see :func:`inequalities.bell_violated_any_labelling`); it must coincide
    with infeasibility. ``bell_violated_literal`` is the single fixed labelling.
    """
    report = feasibility3(counterfactual_marginals(t1, t2, t3))
    violated = inequalities.bell_violated_any_labelling(scenarios.bell_correlation, t1, t2, t3)
    literal = inequalities.bell_check(scenarios.bell_correlation, t1, t2, t3).violated_canonical
    if violated == report.feasible:
        raise InvariantViolation(
            f"Fine equivalence broken at {(t1, t2, t3)}: feasible={report.feasible}, violated={violated}")
    return FeasibilityReport(report.feasible, report.marginals, report.d_interval, report.witness,
                             report.certificate, violated, literal)


def chsh_sign_variants(c_ab, c_ab2, c_a2b, c_a2b2):
    """The eight CHSH combinations: one minus sign in any position, overall +/-."""
    c = np.array([c_ab, c_ab2, c_a2b, c_a2b2])
    out = []
    for k in range(4):
        signs = np.ones(4)
        signs[k] = -1
        s = float(signs @ c)
        out.extend([s, -s])
    return out


def chsh_equalities(c_ab, c_ab2, c_a2b, c_a2b2):
    patterns = sign_patterns(4)
    rows = [([1.0] * 16, 1.0)]
    for i in range(4):
        rows.append(([float(s[i]) for s in patterns], 0.0))
    for c, (i, j) in zip((c_ab, c_ab2, c_a2b, c_a2b2), CHSH_PAIRS):
        rows.append(([float(s[i] * s[j]) for s in patterns], c))
    return rows


def chsh_joint_feasible(c_ab, c_ab2, c_a2b, c_a2b2, exact=False):
    """Does a non-negative joint over (a, a', b, b') reproduce the four correlations?"""
    cs = (c_ab, c_ab2, c_a2b, c_a2b2)
    m = MarginalSet(4, (0.0,) * 4, cs)
    x = lp_feasibility(16, chsh_equalities(*cs), exact=exact)
    if x is None:
        return FeasibilityReport(False, m)
    p = np.array([float(v) for v in x])
    witness = JointDistribution(4, tuple(p / p.sum()))
    return FeasibilityReport(True, m, witness=witness)


def witness_error(report: FeasibilityReport):
    """Largest deviation between the witness moments and the marginal set."""
    w, m = report.witness, report.marginals
    errs = [abs(w.moment({i}) - b) for i, b in enumerate(m.B)]
    errs += [abs(w.moment({i, j}) - c) for c, (i, j) in zip(m.C, m.pairs())]
    if m.D is not None:
        errs.append(abs(w.moment({0, 1, 2}) - m.D))
    return max(errs)
