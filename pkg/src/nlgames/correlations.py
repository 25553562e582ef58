"""Correlations p(a,b|x,y) and their membership predicates.

Predicates return report objects carrying the worst witness rather than bare
booleans.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidCorrelation
from .game_model import Game, validate_game
from .linalg import DEFAULT_TOL


@dataclass
class Correlation:
    p: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.ndim != 4:
            raise DimensionMismatch(f"correlation tensor must be 4-dimensional, got {p.shape}")
        if min(p.shape) < 1:
            raise DimensionMismatch(f"empty correlation tensor {p.shape}")
        self.p = p
        lo, hi = p.min(), p.max()
        if lo < -self.tol or hi > 1 + self.tol:
            raise InvalidCorrelation(f"entries outside [0,1]: min {lo!r}, max {hi!r}")
        sums = p.sum(axis=(2, 3))
        dev = float(np.abs(sums - 1).max())
        if dev > self.tol:
            x, y = np.unravel_index(np.argmax(np.abs(sums - 1)), sums.shape)
            raise InvalidCorrelation(
                f"slice (x={x}, y={y}) sums to {sums[x, y]!r}, deviation {dev:.3e}")

    @property
    def shape(self):
        return self.p.shape

    x_count = property(lambda self: self.p.shape[0])
    y_count = property(lambda self: self.p.shape[1])
    a_count = property(lambda self: self.p.shape[2])
    b_count = property(lambda self: self.p.shape[3])

    @classmethod
    def uniform(cls, x, y, a, b):
        return cls(np.full((x, y, a, b), 1.0 / (a * b)))


@dataclass
class NsReport:
    passed: bool
    discrepancy: float
    witness: tuple | None
    normalization: float
    tol: float

    def to_dict(self):
        return {"passed": self.passed, "discrepancy": self.discrepancy,
                "witness": list(self.witness) if self.witness else None,
                "normalization": self.normalization, "tol": self.tol}


@dataclass
class PerfectReport:
    passed: bool
    max_value: float
    witness: tuple | None
    tol: float

    def to_dict(self):
        return {"passed": self.passed, "max_value": self.max_value,
                "witness": list(self.witness) if self.witness else None, "tol": self.tol}


def _check_shape(c: Correlation, g: Game):
    validate_game(g)
    if c.shape != g.counts:
        raise DimensionMismatch(f"correlation shape {c.shape} does not match game {g.counts}")


def is_nonsignalling(c: Correlation, tol=DEFAULT_TOL) -> NsReport:
    """Both marginal-independence conditions plus normalization.

    The witness is ``("alice", x, a, y, y')`` or ``("bob", y, b, x, x')``
    for the pair of questions with the largest marginal gap.
    """
    p = c.p
    ma = p.sum(axis=3)      # [x, y, a]
    mb = p.sum(axis=2)      # [x, y, b]
    best, witness = 0.0, None
    # alice: spread over y of sum_b p(a,b|x,y)
    spread = ma.max(axis=1) - ma.min(axis=1)      # [x, a]
    if spread.size:
        x, a = np.unravel_index(np.argmax(spread), spread.shape)
        if spread[x, a] > best:
            best = float(spread[x, a])
            witness = ("alice", int(x), int(a), int(np.argmax(ma[x, :, a])), int(np.argmin(ma[x, :, a])))
    spread = mb.max(axis=0) - mb.min(axis=0)      # [y, b]
    if spread.size:
        y, b = np.unravel_index(np.argmax(spread), spread.shape)
        if spread[y, b] > best:
            best = float(spread[y, b])
            witness = ("bob", int(y), int(b), int(np.argmax(mb[:, y, b])), int(np.argmin(mb[:, y, b])))
    norm = float(np.abs(p.sum(axis=(2, 3)) - 1).max())
    return NsReport(best <= tol and norm <= tol, best, witness, norm, tol)


def is_perfect(c: Correlation, g: Game, tol=DEFAULT_TOL) -> PerfectReport:
    _check_shape(c, g)
    mask = g.lam == 0
    if not mask.any():
        return PerfectReport(True, 0.0, None, tol)
    vals = np.where(mask, c.p, -np.inf)
    idx = np.unravel_index(np.argmax(vals), vals.shape)
    m = float(vals[idx])
    return PerfectReport(m <= tol, m, tuple(int(i) for i in idx), tol)


def epsilon_violation(c: Correlation, g: Game) -> float:
    """Largest probability placed on a losing tuple (0 when there are none)."""
    _check_shape(c, g)
    mask = g.lam == 0
    if not mask.any():
        return 0.0
    return float(c.p[mask].max())


def winning_probability(c: Correlation, g: Game) -> float:
    """Game value of ``c`` under the uniform question distribution."""
    _check_shape(c, g)
    return float((c.p * g.lam).sum() / (g.x_count * g.y_count))


def distance(c1: Correlation, c2: Correlation) -> float:
    if c1.shape != c2.shape:
        raise DimensionMismatch(f"shapes differ: {c1.shape} vs {c2.shape}")
    return float(np.abs(c1.p - c2.p).max())


def pr_box():
    p = np.zeros((2, 2, 2, 2))
    for x, y, a, b in np.ndindex(2, 2, 2, 2):
        if (a ^ b) == (x & y):
            p[x, y, a, b] = 0.5
    return Correlation(p)
