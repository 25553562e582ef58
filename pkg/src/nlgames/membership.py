"""Decidable membership and value computations.

* ``ns_feasible``: perfect non-signalling correlations, by phase-1 simplex.
* ``classical_perfect``: exhaustive search over deterministic strategies.
* ``seesaw_value``: a lower bound on the quantum value with uniform questions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .correlations import Correlation, winning_probability
from .errors import NumericalInstability, SearchSpaceTooLarge
from .game_model import Game, validate_game
from .linalg import dagger
from .simplex import LpProblem, phase1
from .strategies import (DeterministicStrategy, TensorStrategy, correlation_from_tensor,
                         random_tensor_strategy)

DEFAULT_CAP = 10**6
MONOTONE_TOL = 1e-12


def build_ns_lp(g: Game) -> LpProblem:
    """Variables p(a,b|x,y) >= 0 in row-major order.

    Rows: normalization per (x, y); Alice marginals equal for consecutive y;
    Bob marginals equal for consecutive x; p = 0 wherever lambda = 0.
    """
    validate_game(g)
    X, Y, A, B = g.counts
    n = X * Y * A * B
    idx = np.arange(n).reshape(X, Y, A, B)
    rows, rhs = [], []

    def row(pos, neg=()):
        r = np.zeros(n)
        r[np.ravel(pos)] += 1.0
        if len(neg):
            r[np.ravel(neg)] -= 1.0
        return r

    for x, y in np.ndindex(X, Y):
        rows.append(row(idx[x, y]))
        rhs.append(1.0)
    for x, a, y in itertools.product(range(X), range(A), range(Y - 1)):
        rows.append(row(idx[x, y, a, :], idx[x, y + 1, a, :]))
        rhs.append(0.0)
    for y, b, x in itertools.product(range(Y), range(B), range(X - 1)):
        rows.append(row(idx[x, y, :, b], idx[x + 1, y, :, b]))
        rhs.append(0.0)
    for t in np.argwhere(g.lam == 0):
        rows.append(row([idx[tuple(t)]]))
        rhs.append(0.0)
    labels = [tuple(int(i) for i in t) for t in np.ndindex(X, Y, A, B)]
    return LpProblem(n, np.array(rows), np.array(rhs), labels)


@dataclass
class NsResult:
    feasible: bool
    witness: Correlation | None
    iterations: int
    infeasibility: float

    def to_dict(self):
        out = {"feasible": self.feasible, "iterations": self.iterations,
               "infeasibility": self.infeasibility}
        if self.witness is not None:
            from .serialize import correlation_to_json
            out["witness"] = correlation_to_json(self.witness)
        return out


def ns_feasible(g: Game) -> NsResult:
    lp = build_ns_lp(g)
    res = phase1(lp)
    if not res.feasible:
        return NsResult(False, None, res.iterations, res.infeasibility)
    p = res.x.reshape(g.counts)
    # renormalize away pivot round-off; the LP already pins every slice to 1
    p = p / p.sum(axis=(2, 3), keepdims=True)
    return NsResult(True, Correlation(p), res.iterations, res.infeasibility)


@dataclass
class ClassicalSearch:
    strategy: DeterministicStrategy | None
    visited: int
    total: int

    def to_dict(self):
        s = None if self.strategy is None else {"f": list(self.strategy.f), "g": list(self.strategy.g)}
        return {"found": s is not None, "strategy": s, "visited": self.visited, "total": self.total}


def classical_search(g: Game, cap=DEFAULT_CAP) -> ClassicalSearch:
    """Lexicographic scan of (f, g) pairs, f the major key.

    For a fixed f the first perfect g in lexicographic order takes, for each
    y, the smallest b allowed against every x, so the scan over g is done in
    closed form; ``visited`` counts strategies exactly as a naive scan would.
    """
    validate_game(g)
    X, Y, A, B = g.counts
    total = A ** X * B ** Y
    if total > cap:
        raise SearchSpaceTooLarge(f"{total} deterministic strategies exceed cap {cap}")
    lam = g.lam.astype(bool)
    per_f = B ** Y
    visited = 0
    for f in itertools.product(range(A), repeat=X):
        allowed = np.ones((Y, B), dtype=bool)
        for x, a in enumerate(f):
            allowed &= lam[x, :, a, :]
        if allowed.any(axis=1).all():
            gy = tuple(int(np.argmax(allowed[y])) for y in range(Y))
            rank = sum(b * B ** (Y - 1 - y) for y, b in enumerate(gy))
            visited += rank + 1
            return ClassicalSearch(DeterministicStrategy(f, gy), visited, total)
        visited += per_f
    return ClassicalSearch(None, visited, total)


def classical_perfect(g: Game, cap=DEFAULT_CAP) -> DeterministicStrategy | None:
    return classical_search(g, cap).strategy


# seesaw

def _alice_operators(s: TensorStrategy, lam):
    # M[x, a] = sum_{y,b} lam Psi Q^T Psi*, so that value = sum tr(P_a^x M_a^x)
    m = s.psi_matrix
    q_sum = np.einsum("xyab,ybij->xaij", lam, s.bob)
    return np.einsum("ik,xalk,jl->xaij", m, q_sum, m.conj())


def _bob_operators(s: TensorStrategy, lam):
    # N[y, b] = sum_{x,a} lam (Psi* P Psi)^T
    m = s.psi_matrix
    p_sum = np.einsum("xyab,xaij->ybij", lam, s.alice)
    inner = np.einsum("ki,ybkl,lj->ybij", m.conj(), p_sum, m)
    return np.swapaxes(inner, -1, -2)


def _best_pvm(ops):
    """Spectral PVM maximizing sum_a tr(P_a ops[a]) among eigenbases of candidate operators.

    Candidates are the eigenbases of ops[a] - ops[a'] (a < a') and of each
    ops[a]; each eigenvector goes to the answer with the largest expectation,
    lowest index on ties.  For two answers this is the exact optimum.
    """
    n, d = ops.shape[0], ops.shape[1]
    herm = (ops + dagger(ops)) / 2
    cands = [herm[a] - herm[c] for a in range(n) for c in range(a + 1, n)]
    cands += [herm[a] for a in range(n)]
    best, best_val = None, -np.inf
    for h in cands:
        _, vecs = np.linalg.eigh(h)
        exp = np.einsum("ik,aij,jk->ka", vecs.conj(), herm, vecs).real     # [vector, answer]
        assign = np.argmax(exp, axis=1)
        val = float(exp[np.arange(d), assign].sum())
        if val > best_val:
            pvm = np.zeros((n, d, d), dtype=np.complex128)
            for k in range(d):
                v = vecs[:, k]
                pvm[assign[k]] += np.outer(v, v.conj())
            best, best_val = pvm, val
    return best, best_val


def _current_val(pvms, ops):
    return float(np.einsum("qaij,qaji->", pvms, ops).real)


@dataclass
class SeesawResult:
    value: float
    history: list = field(default_factory=list)
    strategy: TensorStrategy | None = None

    def to_dict(self):
        return {"value": self.value, "history": self.history}


def seesaw(g: Game, dim, iters, seed) -> SeesawResult:
    """Alternate optimal updates of Alice's PVMs, Bob's PVMs and the state.

    A PVM update is accepted only if it does not lower the value, so the
    history is nondecreasing.
    """
    validate_game(g)
    lam = g.lam.astype(np.float64) / (g.x_count * g.y_count)
    s = random_tensor_strategy(g, dim, dim, seed)
    value = winning_probability(correlation_from_tensor(s, g), g)
    history = [value]
    for _ in range(iters):
        ops = _alice_operators(s, lam)
        cur = _current_val(s.alice, ops)
        new = np.array([_best_pvm(ops[x])[0] for x in range(g.x_count)])
        if _current_val(new, ops) >= cur:
            s = TensorStrategy(dim, dim, s.psi, new, s.bob)

        ops = _bob_operators(s, lam)
        cur = _current_val(s.bob, ops)
        new = np.array([_best_pvm(ops[y])[0] for y in range(g.y_count)])
        if _current_val(new, ops) >= cur:
            s = TensorStrategy(dim, dim, s.psi, s.alice, new)

        w = np.einsum("xyab,xaij,ybkl->ikjl", lam, s.alice, s.bob).reshape(dim * dim, dim * dim)
        w = (w + dagger(w)) / 2
        evals, evecs = np.linalg.eigh(w)
        old = float(np.vdot(s.psi, w @ s.psi).real)
        if evals[-1] >= old:
            s = TensorStrategy(dim, dim, evecs[:, -1], s.alice, s.bob)

        value = winning_probability(correlation_from_tensor(s, g), g)
        if value < history[-1] - MONOTONE_TOL:
            raise NumericalInstability(
                f"seesaw value decreased from {history[-1]!r} to {value!r}")
        history.append(value)
    return SeesawResult(value, history, s)


def seesaw_value(g: Game, dim, iters, seed) -> float:
    return seesaw(g, dim, iters, seed).value
