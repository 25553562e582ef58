"""Dense phase-1 simplex with Bland's rule, for feasibility of A x = b, x >= 0."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NumericalInstability

PIVOT_TOL = 1e-9
DEGENERATE_PIVOT = 1e-12


@dataclass
class LpProblem:
    n_vars: int
    a_eq: np.ndarray
    b_eq: np.ndarray
    labels: list | None = None

    def __post_init__(self):
        self.a_eq = np.asarray(self.a_eq, dtype=np.float64).reshape(-1, self.n_vars)
        self.b_eq = np.asarray(self.b_eq, dtype=np.float64).reshape(-1)
        if self.a_eq.shape[0] != self.b_eq.shape[0]:
            raise DimensionMismatch(
                f"{self.a_eq.shape[0]} constraint rows but {self.b_eq.shape[0]} right-hand sides")


@dataclass
class Phase1Result:
    feasible: bool
    x: np.ndarray | None
    infeasibility: float
    iterations: int


def phase1(lp: LpProblem, tol=PIVOT_TOL, max_iter=100_000) -> Phase1Result:
    """Minimize the sum of artificial variables from the all-artificial basis.

    Bland's rule: the entering column is the lowest-index one with negative
    reduced cost, the leaving row the minimum-ratio row whose basic variable has
    the lowest index.  The problem is feasible iff the optimum is <= tol times
    the scale of b.
    """
    a = lp.a_eq.copy()
    b = lp.b_eq.copy()
    m, n = a.shape
    if m == 0:
        return Phase1Result(True, np.zeros(n), 0.0, 0)
    neg = b < 0
    a[neg] *= -1
    b[neg] *= -1
    tab = np.hstack([a, np.eye(m), b[:, None]])
    basis = list(range(n, n + m))
    cost = np.concatenate([np.zeros(n), np.ones(m)])
    it = 0
    while True:
        cb = cost[basis]
        reduced = cost - cb @ tab[:, :-1]
        entering = next((j for j in range(n + m) if reduced[j] < -tol), None)
        if entering is None:
            break
        it += 1
        if it > max_iter:
            raise NumericalInstability(f"phase 1 did not terminate in {max_iter} pivots")
        col = tab[:, entering]
        rows = np.flatnonzero(col > tol)
        if rows.size == 0:
            # phase 1 is bounded below by 0; an unbounded ray means lost precision
            raise NumericalInstability(
                f"no admissible pivot in column {entering} (max entry {col.max():.3e})")
        ratios = tab[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + tol * max(1.0, abs(best))]
        leave = min(tied, key=lambda r: basis[r])
        piv = tab[leave, entering]
        if abs(piv) < DEGENERATE_PIVOT:
            raise NumericalInstability(f"pivot magnitude {piv:.3e} below {DEGENERATE_PIVOT}")
        tab[leave] /= piv
        factors = tab[:, entering].copy()
        factors[leave] = 0.0
        tab -= np.outer(factors, tab[leave])
        basis[leave] = entering
    x_full = np.zeros(n + m)
    for r, j in enumerate(basis):
        x_full[j] = tab[r, -1]
    infeas = float(x_full[n:].sum())
    scale = max(1.0, float(np.abs(b).max()))
    feasible = infeas <= tol * scale
    x = np.clip(x_full[:n], 0.0, None) if feasible else None
    return Phase1Result(feasible, x, infeas, it)
