"""Phase-1 simplex for small equality-constrained feasibility problems.

Finds x >= 0 with A x = b, or reports that none exists. Pivoting follows
Bland's rule (lowest-index entering column, lowest-index leaving basic
variable on ratio ties), so results are deterministic and the method cannot
cycle. With ``exact=True`` the tableau holds ``fractions.Fraction`` objects
and no tolerances are used.
"""

from fractions import Fraction

import numpy as np

MAX_VARS = 64
MAX_EQUALITIES = 32


class SimplexTableau:
    def __init__(self, a, b, exact=False, eps=1e-12):
        m, n = a.shape
        self.m, self.n = m, n
        self.exact = exact
        self.eps = 0 if exact else eps
        dtype = object if exact else float
        t = np.zeros((m, n + m + 1), dtype=dtype)
        if exact:
            t[...] = Fraction(0)
        for i in range(m):
            sign = -1 if b[i] < 0 else 1
            for j in range(n):
                t[i, j] = sign * a[i, j]
            t[i, n + i] = Fraction(1) if exact else 1.0
            t[i, -1] = sign * b[i]
        self.t = t
        self.basis = list(range(n, n + m))
        # reduced costs of the phase-1 objective sum(artificials)
        self.cost = np.zeros(n + m + 1, dtype=dtype)
        if exact:
            self.cost[...] = Fraction(0)
        for i in range(m):
            self.cost[:n] = self.cost[:n] - t[i, :n]
            self.cost[-1] = self.cost[-1] - t[i, -1]

    def pivot(self, row, col):
        t = self.t
        t[row] = t[row] / t[row, col]
        for i in range(self.m):
            if i != row and t[i, col] != 0:
                t[i] = t[i] - t[i, col] * t[row]
        if self.cost[col] != 0:
            self.cost = self.cost - self.cost[col] * t[row]
        self.basis[row] = col

    def entering(self):
        for j in range(self.n + self.m):
            if self.cost[j] < -self.eps:
                return j
        return None

    def leaving(self, col):
        best = None
        for i in range(self.m):
            if self.t[i, col] > self.eps:
                ratio = self.t[i, -1] / self.t[i, col]
                key = (ratio, self.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        return None if best is None else best[1]

    def solve(self, max_pivots=10_000):
        for _ in range(max_pivots):
            col = self.entering()
            if col is None:
                return
            row = self.leaving(col)
            if row is None:  # phase-1 objective is bounded below by 0
                raise RuntimeError("unbounded phase-1 problem")
            self.pivot(row, col)
        raise RuntimeError("pivot limit reached")

    def infeasibility(self):
        """Current value of sum(artificials)."""
        return -self.cost[-1]

    def solution(self):
        x = np.zeros(self.n, dtype=object if self.exact else float)
        if self.exact:
            x[...] = Fraction(0)
        for i, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.t[i, -1]
        return x


def lp_feasibility(n_vars, equalities, exact=False, tol=1e-9):
    """Return x >= 0 satisfying every ``(coefficients, rhs)`` equality, or None."""
    if n_vars > MAX_VARS or len(equalities) > MAX_EQUALITIES:
        raise ValueError(f"at most {MAX_VARS} variables and {MAX_EQUALITIES} equalities")
    if exact:
        a = np.array([[Fraction(c) for c in row] for row, _ in equalities], dtype=object)
        b = np.array([Fraction(r) for _, r in equalities], dtype=object)
    else:
        a = np.array([row for row, _ in equalities], dtype=float)
        b = np.array([r for _, r in equalities], dtype=float)
    if a.shape != (len(equalities), n_vars):
        raise ValueError("every equality needs one coefficient per variable")
    tab = SimplexTableau(a, b, exact=exact)
    tab.solve()
    if exact:
        return tab.solution() if tab.infeasibility() == 0 else None
    if tab.infeasibility() > tol:
        return None
    return np.clip(tab.solution(), 0.0, None)
