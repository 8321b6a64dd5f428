"""Bell-type inequality evaluation and violation search.

A correlation source is any callable ``corr(a, b)`` returning a value in
[-1, 1]. Scans call it with numpy arrays, so sources used with
:func:`scan` / :func:`maximize_violation` must broadcast (all sources in this
package do).

Two three-setting forms are evaluated side by side:

* the sum form  -1 <= C12 + C13 - C23 <= 1
* Bell's original form  |C12 - C13| <= 1 + C23

Violation verdicts use Bell's original form; the sum form is reported for
comparison only, since deterministic perfectly anti-correlated local models
already reach C12 + C13 - C23 = 3.
"""

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .tolerances import TOL

TSIRELSON = 2.0 * math.sqrt(2.0)
_RANGE_SLACK = 1e-9
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class CorrelationRangeError(ValueError):
    pass


def _checked(corr, a, b):
    v = np.asarray(corr(a, b), dtype=float)
    if np.any(np.abs(v) > 1.0 + _RANGE_SLACK) or not np.all(np.isfinite(v)):
        raise CorrelationRangeError(f"correlation outside [-1, 1]: {v!r}")
    return float(v) if v.ndim == 0 else v


def singlet_corr(a, b):
    """Closed-form singlet correlation -cos(a - b)."""
    return -np.cos(np.subtract(a, b))


def lhv_linear_corr(a, b):
    """Anti-correlated sign model: -(1 - 2 Delta / pi), Delta folded into [0, pi]."""
    d = np.abs(np.mod(np.subtract(a, b) + np.pi, 2 * np.pi) - np.pi)
    return -(1.0 - 2.0 * d / np.pi)


@dataclass(frozen=True)
class BellReport:
    angles: tuple
    sum_expression: float
    canonical_lhs: float
    canonical_rhs: float
    violated_canonical: bool
    within_paper_bounds: bool

    @property
    def canonical_margin(self):
        return self.canonical_lhs - self.canonical_rhs


@dataclass(frozen=True)
class ChshReport:
    settings: tuple
    s_value: float
    violated: bool


def bell_check(corr: Callable, t1, t2, t3):
    c12 = _checked(corr, t1, t2)
    c13 = _checked(corr, t1, t3)
    c23 = _checked(corr, t2, t3)
    expr = c12 + c13 - c23
    lhs = abs(c12 - c13)
    rhs = 1.0 + c23
    return BellReport(
        angles=(t1, t2, t3),
        sum_expression=expr,
        canonical_lhs=lhs,
        canonical_rhs=rhs,
        violated_canonical=lhs > rhs + TOL.eq,
        within_paper_bounds=-1.0 - TOL.eq <= expr <= 1.0 + TOL.eq,
    )


def bell_violated_any_labelling(corr: Callable, t1, t2, t3):
    """Bell's form over every relabelling of the same three axes.

    Relabelling = choice of which axis plays each role, and reversing the
    outcome polarity of any axis (which flips the sign of every correlation
    involving it). Together these give the complete set of three-setting
    constraints for perfectly anti-correlated pairs.
    """
    c = {(0, 1): _checked(corr, t1, t2),
         (0, 2): _checked(corr, t1, t3),
         (1, 2): _checked(corr, t2, t3)}

    def pair(i, j, flips):
        return flips[i] * flips[j] * c[(min(i, j), max(i, j))]

    for flips in itertools.product((1, -1), repeat=3):
        for a, b, d in itertools.permutations(range(3)):
            if abs(pair(a, b, flips) - pair(a, d, flips)) > 1.0 + pair(b, d, flips) + TOL.eq:
                return True
    return False


def chsh_value(corr: Callable, a, a2, b, b2):
    return (_checked(corr, a, b) + _checked(corr, a, b2)
            + _checked(corr, a2, b) - _checked(corr, a2, b2))


def chsh_check(corr: Callable, a, a2, b, b2):
    s = chsh_value(corr, a, a2, b, b2)
    return ChshReport((a, a2, b, b2), s, abs(s) > 2.0 + TOL.eq)


# -- scans ------------------------------------------------------------------

FAMILIES = ("bell_paper", "bell_canonical", "chsh")
N_SETTINGS = {"bell_paper": 3, "bell_canonical": 3, "chsh": 4}


def family_objective(family, corr, *angles):
    """Scalar to maximise; positive means the family's bound is exceeded.

    bell_paper: |C12 + C13 - C23| - 1; bell_canonical: lhs - rhs;
    chsh: |S| - 2.
    """
    if family == "bell_paper":
        t1, t2, t3 = angles
        return np.abs(_checked(corr, t1, t2) + _checked(corr, t1, t3) - _checked(corr, t2, t3)) - 1.0
    if family == "bell_canonical":
        t1, t2, t3 = angles
        return (np.abs(_checked(corr, t1, t2) - _checked(corr, t1, t3))
                - 1.0 - _checked(corr, t2, t3))
    if family == "chsh":
        return np.abs(chsh_value(corr, *angles)) - 2.0
    raise ValueError(f"unknown family {family!r}")


BOUNDS = {"bell_paper": 1.0, "bell_canonical": 0.0, "chsh": 2.0}



def grid_axis(step):
    n = int(round(2 * math.pi / step))
    return np.arange(n) * step


def scan(family, corr, step, block=4096):
    """Evaluate the family objective on the full angle torus.

    Returns ``(angles, values)`` with ``angles`` of shape (N, k) in grid-index
    order (first setting slowest). Evaluated in blocks of the first setting.
    """
    k = N_SETTINGS[family]
    axis = grid_axis(step)
    rest = np.array(list(itertools.product(axis, repeat=k - 1))) if k > 1 else np.zeros((1, 0))
    all_angles, all_values = [], []
    for first in axis:
        for start in range(0, len(rest), block):
            chunk = rest[start:start + block]
            cols = [np.full(len(chunk), first)] + [chunk[:, i] for i in range(k - 1)]
            all_values.append(np.asarray(family_objective(family, corr, *cols), dtype=float))
            all_angles.append(np.column_stack(cols))
    return np.concatenate(all_angles), np.concatenate(all_values)


def grid_extremum(family, corr, step):
    """Exact maximum of the family objective over the full angle grid.

    Works from the correlation matrix M[i, j] = corr(g_i, g_j). For CHSH,
    with (a, a') fixed, S = u[b] + v[b'] where u = M[a] + M[a'] and
    v = M[a] - M[a'], so max |S| over (b, b') is attained at the extremes of
    u and v; this keeps the exhaustive scan O(n^3).
    Returns ``(angles, violation)``.
    """
    axis = grid_axis(step)
    n = len(axis)
    m = np.asarray(_checked(corr, axis[:, None], axis[None, :]), dtype=float)
    if family in ("bell_paper", "bell_canonical"):
        best, arg = -np.inf, None
        for i in range(n):
            row = m[i]
            if family == "bell_paper":
                v = np.abs(row[:, None] + row[None, :] - m) - 1.0
            else:
                v = np.abs(row[:, None] - row[None, :]) - 1.0 - m
            k = int(np.argmax(v))
            if v.flat[k] > best:
                best, arg = float(v.flat[k]), (i,) + np.unravel_index(k, v.shape)
        return tuple(float(axis[j]) for j in arg), best
    if family == "chsh":
        u = m[:, None, :] + m[None, :, :]
        w = m[:, None, :] - m[None, :, :]
        hi = u.max(axis=2) + w.max(axis=2)
        lo = -(u.min(axis=2) + w.min(axis=2))
        use_hi = hi >= lo
        best_s = np.where(use_hi, hi, lo)
        a, a2 = np.unravel_index(int(np.argmax(best_s)), best_s.shape)
        if use_hi[a, a2]:
            b, b2 = int(np.argmax(u[a, a2])), int(np.argmax(w[a, a2]))
        else:
            b, b2 = int(np.argmin(u[a, a2])), int(np.argmin(w[a, a2]))
        return (float(axis[a]), float(axis[a2]), float(axis[b]), float(axis[b2])), float(best_s[a, a2]) - 2.0
    raise ValueError(f"unknown family {family!r}")


def _golden_max(f, lo, hi, tol=1e-12, max_iter=200):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


class Maximum(NamedTuple):
    angles: tuple
    value: float       # |S|, canonical lhs - rhs, or |C12 + C13 - C23|
    violation: float   # value minus the family's local bound


def maximize_violation(family, corr, grid_step=math.pi / 8, refine_iters=10):
    """Grid scan followed by round-robin golden-section refinement.

    Each refinement round searches every coordinate within one grid step of
    the incumbent, keeping a move only if it improves the objective.
    """
    if not (0.0 < grid_step <= math.pi / 8 + 1e-15):
        raise ValueError("grid_step must lie in (0, pi/8]")
    if refine_iters < 0:
        raise ValueError("refine_iters must be >= 0")
    start, fx = grid_extremum(family, corr, grid_step)
    x = list(start)
    for _ in range(refine_iters):
        for i in range(len(x)):
            def f(t, i=i):
                y = list(x)
                y[i] = t
                return float(family_objective(family, corr, *y))
            t, ft = _golden_max(f, x[i] - grid_step, x[i] + grid_step)
            if ft > fx:
                x[i], fx = t, ft
    return Maximum(tuple(x), fx + BOUNDS[family], fx)


def scan_csv(family, corr, step, angle_scale=1.0, fmt="{:.12g}"):
    """CSV with one row per grid point: angles, expression value, violated flag."""
    angles, values = scan(family, corr, step)
    k = angles.shape[1]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"angle{i + 1}" for i in range(k)] + ["value", "violation", "violated"])
    off = BOUNDS[family]
    for row, v in zip(angles, values):
        w.writerow([fmt.format(a * angle_scale) for a in row]
                   + [fmt.format(v + off), fmt.format(v), int(v > TOL.eq)])
    return buf.getvalue()
