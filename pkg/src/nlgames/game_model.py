"""Finite nonlocal games: representation, validation and classification.

A game is the tuple (X, Y, A, B, lambda) with lambda a 0/1 scoring tensor
indexed ``lam[x, y, a, b]``.  Everything in this module is exact integer
logic; no floating point is involved.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, EmptySet


@dataclass(frozen=True)
class Game:
    x_count: int
    y_count: int
    a_count: int
    b_count: int
    lam: np.ndarray = field(repr=False)

    def __post_init__(self):
        lam = np.array(self.lam, dtype=np.int8)
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @property
    def counts(self):
        return (self.x_count, self.y_count, self.a_count, self.b_count)

    @classmethod
    def from_wins(cls, x, y, a, b, wins):
        """Densify a sparse list of winning tuples ``(x, y, a, b)``."""
        lam = np.zeros((x, y, a, b), dtype=np.int8)
        for t in wins:
            lam[tuple(t)] = 1
        return cls(x, y, a, b, lam)

    @classmethod
    def from_predicate(cls, x, y, a, b, pred):
        lam = np.zeros((x, y, a, b), dtype=np.int8)
        for idx in itertools.product(range(x), range(y), range(a), range(b)):
            lam[idx] = 1 if pred(*idx) else 0
        return cls(x, y, a, b, lam)

    def wins(self):
        """Winning tuples in lexicographic order."""
        return [tuple(int(i) for i in t) for t in np.argwhere(self.lam == 1)]

    def transposed(self):
        """Swap the players: X<->Y, A<->B."""
        return Game(self.y_count, self.x_count, self.b_count, self.a_count,
                    np.transpose(self.lam, (1, 0, 3, 2)))

    def relabeled(self, px, py, pa, pb):
        """Game with question/answer labels permuted: new index i is old p[i]."""
        lam = self.lam[np.ix_(px, py, pa, pb)]
        return Game(self.x_count, self.y_count, self.a_count, self.b_count, lam)

    def __eq__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return self.counts == other.counts and np.array_equal(self.lam, other.lam)

    def __hash__(self):
        return hash((self.counts, self.lam.tobytes()))


@dataclass
class ImitationReport:
    is_imitation: bool
    a_violations: list
    b_violations: list

    def to_dict(self):
        return {
            "is_imitation": self.is_imitation,
            "a_violations": [list(t) for t in self.a_violations],
            "b_violations": [list(t) for t in self.b_violations],
        }


def validate_game(g: Game) -> None:
    counts = g.counts
    for name, c in zip(("x", "y", "a", "b"), counts):
        if int(c) != c:
            raise DimensionMismatch(f"{name}_count must be an integer, got {c!r}")
        if c < 1:
            raise EmptySet(f"{name}_count must be >= 1, got {c}")
    expected = int(np.prod(counts))
    if g.lam.size != expected or g.lam.shape != tuple(counts):
        raise DimensionMismatch(
            f"scoring tensor has shape {g.lam.shape} ({g.lam.size} entries), "
            f"expected {tuple(counts)} ({expected} entries)")
    if not np.isin(g.lam, (0, 1)).all():
        raise DimensionMismatch("scoring tensor entries must be 0 or 1")


def _overlap_a(lam):
    # overlap[x, y, a, a'] = sum_b lam(x,y,a,b) lam(x,y,a',b)
    lam = lam.astype(np.int64)
    return np.einsum("xyab,xycb->xyac", lam, lam)


def _overlap_b(lam):
    lam = lam.astype(np.int64)
    return np.einsum("xyab,xyac->xybc", lam, lam)


def separating_pairs_a(g: Game):
    """Boolean array sep[x, y, a, a'] true when y separates a and a' at x."""
    return _overlap_a(g.lam) == 0


def separating_pairs_b(g: Game):
    """Boolean array sep[x, y, b, b'] true when x separates b and b' at y."""
    return _overlap_b(g.lam) == 0


def is_imitation(g: Game) -> ImitationReport:
    """Check both separation conditions of an imitation game.

    Violations are reported once per unordered answer pair (a < a').
    """
    validate_game(g)
    sep_a = separating_pairs_a(g).any(axis=1)       # [x, a, a']
    sep_b = separating_pairs_b(g).any(axis=0)       # [y, b, b']
    a_viol = [(x, a, c) for x in range(g.x_count)
              for a in range(g.a_count) for c in range(a + 1, g.a_count)
              if not sep_a[x, a, c]]
    b_viol = [(y, b, c) for y in range(g.y_count)
              for b in range(g.b_count) for c in range(b + 1, g.b_count)
              if not sep_b[y, b, c]]
    return ImitationReport(not a_viol and not b_viol, a_viol, b_viol)


def zero_support(g: Game):
    """All (x, y, a, b) with lambda = 0, lexicographically ordered."""
    validate_game(g)
    return [tuple(int(i) for i in t) for t in np.argwhere(g.lam == 0)]


# canonical corpus

def copy_game():
    return Game.from_predicate(1, 1, 2, 2, lambda x, y, a, b: a == b)


def all_game():
    return Game(2, 2, 2, 2, np.ones((2, 2, 2, 2), dtype=np.int8))


def none_game():
    return Game(1, 1, 1, 1, np.zeros((1, 1, 1, 1), dtype=np.int8))


def chsh_game():
    return Game.from_predicate(2, 2, 2, 2, lambda x, y, a, b: (a ^ b) == (x & y))


def parity_game():
    return Game.from_predicate(2, 2, 2, 2, lambda x, y, a, b: (a ^ b) == (x ^ y))


def copy2_game():
    """Two-question copy game: answers must agree whenever the questions agree."""
    return Game.from_predicate(2, 2, 2, 2, lambda x, y, a, b: x != y or a == b)


CANONICAL = {
    "copy": copy_game,
    "all": all_game,
    "none": none_game,
    "chsh": chsh_game,
    "parity": parity_game,
    "copy2": copy2_game,
}
