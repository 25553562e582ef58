"""Induced projections, residual bounds and trace diagnostics for tensor strategies.

Given a tensor strategy for an imitation game, build

    pre_pi[x, y, b] = sum_{a : lam(x,y,a,b)=1} P_a^x      (on H_A)
    pi[y, b]        = meet over x of pre_pi[x, y, b]
    pre_xi[y, x, a] = sum_{b : lam(x,y,a,b)=1} Q_b^y      (on H_B)
    xi[x, a]        = meet over y of pre_xi[y, x, a]

and measure how far the strategy is from the exact identities a perfect
strategy satisfies.  Operators act on psi through its matrix form Psi:
``(A (x) 1) psi = A @ Psi`` and ``(1 (x) B) psi = Psi @ B.T``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .correlations import epsilon_violation
from .errors import EmptyFamily, InvalidStrategy, NotAProjection, NotImitation, NotPerfect, WordTooLong
from .game_model import Game, is_imitation, separating_pairs_b
from .linalg import (DEFAULT_TOL, check_projection, cyclic_subspace, dagger, fro,
                     meet_of_projections)
from .strategies import TensorStrategy, correlation_from_tensor

DEFAULT_MAX_WORD = 4


@dataclass
class InducedProjections:
    pre_pi: np.ndarray      # (X, Y, B, dA, dA)
    pi: np.ndarray          # (Y, B, dA, dA)
    pre_xi: np.ndarray      # (Y, X, A, dB, dB)
    xi: np.ndarray          # (X, A, dB, dB)


@dataclass
class WitnessReport:
    eps_input: float
    r1: float
    r2: float
    r3: float
    r4: float
    r5: float
    commutator_defect: float
    measured_constants: dict
    witnesses: dict
    tol: float
    dim: int
    bound: float
    is_imitation: bool
    hypothesis_x2_a2: bool

    @property
    def residuals(self):
        return {"r1": self.r1, "r2": self.r2, "r3": self.r3, "r4": self.r4, "r5": self.r5,
                "commutator_defect": self.commutator_defect}

    @property
    def exact_case_ok(self):
        return all(v <= self.bound for v in self.residuals.values())

    def to_dict(self):
        return {
            "eps_input": self.eps_input,
            "r1": self.r1, "r2": self.r2, "r3": self.r3, "r4": self.r4, "r5": self.r5,
            "commutator_defect": self.commutator_defect,
            "measured_constants": self.measured_constants,
            "witnesses": {k: list(v) if v is not None else None for k, v in self.witnesses.items()},
            "tol": self.tol, "dim": self.dim, "bound": self.bound,
            "is_imitation": self.is_imitation, "hypothesis_x2_a2": self.hypothesis_x2_a2,
        }


def _require_imitation(g: Game):
    rep = is_imitation(g)
    if not rep.is_imitation:
        if rep.a_violations:
            x, a, a2 = rep.a_violations[0]
            msg = f"no y separates answers {a},{a2} at x={x}"
            triple = ("a",) + rep.a_violations[0]
        else:
            y, b, b2 = rep.b_violations[0]
            msg = f"no x separates answers {b},{b2} at y={y}"
            triple = ("b",) + rep.b_violations[0]
        raise NotImitation(f"not an imitation game: {msg}", triple)
    return rep


def induce_projections(s: TensorStrategy, g: Game, tol=DEFAULT_TOL,
                       check_imitation=True) -> InducedProjections:
    if check_imitation:
        _require_imitation(g)
    correlation_from_tensor(s, g, tol)      # shape and validity checks
    lam = g.lam.astype(np.float64)
    pre_pi = np.einsum("xyab,xaij->xybij", lam, s.alice)
    pre_xi = np.einsum("xyab,ybij->yxaij", lam, s.bob)
    for fam in (pre_pi, pre_xi):
        for idx in np.ndindex(*fam.shape[:3]):
            try:
                check_projection(fam[idx], tol)
            except NotAProjection as exc:
                raise InvalidStrategy(f"induced operator {idx} is not a projection: {exc}") from None
    pi = np.empty((g.y_count, g.b_count, s.dim_a, s.dim_a), dtype=np.complex128)
    for y, b in np.ndindex(g.y_count, g.b_count):
        pi[y, b] = meet_of_projections(list(pre_pi[:, y, b]), tol)
    xi = np.empty((g.x_count, g.a_count, s.dim_b, s.dim_b), dtype=np.complex128)
    for x, a in np.ndindex(g.x_count, g.a_count):
        xi[x, a] = meet_of_projections(list(pre_xi[:, x, a]), tol)
    return InducedProjections(pre_pi, pi, pre_xi, xi)


def _argmax(vals):
    """(max value, index) over a dict of index -> value; (0.0, None) if empty."""
    if not vals:
        return 0.0, None
    idx = max(vals, key=lambda k: (vals[k], tuple(-i for i in k)))
    return float(vals[idx]), idx


def witness_report(s: TensorStrategy, g: Game, tol=DEFAULT_TOL,
                   check_imitation=True) -> WitnessReport:
    """Every norm bound in the approximate-trace argument, measured.

    r1 = max |(1 - pre_pi[x,y,b]) (x) Q_b^y psi|
    r2 = max over separating (x, y, b != b') of |pre_pi[x,y,b] (x) Q_b'^y psi|
    r3 = max |(1 - pi[y,b]) (x) Q_b^y psi|
    r4 = max over b != b' of |pi[y,b] (x) Q_b'^y psi|
    r5 = max |(1 (x) Q_b^y - pi[y,b] (x) 1) psi|
    commutator_defect = max |<psi|Q1 Q2 psi> - <psi|Q2 Q1 psi>| over Bob projections.
    """
    ip = induce_projections(s, g, tol, check_imitation)
    eps = epsilon_violation(correlation_from_tensor(s, g, tol), g)
    m = s.psi_matrix
    ia = np.eye(s.dim_a)
    # q_psi[y, b] = (1 (x) Q_b^y) psi as a matrix
    q_psi = np.einsum("il,ybml->ybim", m, s.bob)
    sep = separating_pairs_b(g)
    X, Y, B = g.x_count, g.y_count, g.b_count

    r1 = {(x, y, b): fro((ia - ip.pre_pi[x, y, b]) @ q_psi[y, b])
          for x, y, b in np.ndindex(X, Y, B)}
    r2 = {(x, y, b, c): fro(ip.pre_pi[x, y, b] @ q_psi[y, c])
          for x, y, b, c in np.ndindex(X, Y, B, B) if b != c and sep[x, y, b, c]}
    r3 = {(y, b): fro((ia - ip.pi[y, b]) @ q_psi[y, b]) for y, b in np.ndindex(Y, B)}
    r4 = {(y, b, c): fro(ip.pi[y, b] @ q_psi[y, c])
          for y, b, c in np.ndindex(Y, B, B) if b != c}
    r5 = {(y, b): fro(q_psi[y, b] - ip.pi[y, b] @ m) for y, b in np.ndindex(Y, B)}

    flat = q_psi.reshape(Y * B, -1)
    gram = flat.conj() @ flat.T          # gram[i, j] = <Q_i psi, Q_j psi> = <psi|Q_i Q_j|psi>
    comm = np.abs(gram - gram.T)
    i, j = np.unravel_index(np.argmax(comm), comm.shape)
    cd = float(comm[i, j])
    cd_w = (int(i // B), int(i % B), int(j // B), int(j % B))

    vals, wits = {}, {}
    for name, d in (("r1", r1), ("r2", r2), ("r3", r3), ("r4", r4), ("r5", r5)):
        vals[name], wits[name] = _argmax(d)
    wits["commutator_defect"] = cd_w
    vals["commutator_defect"] = cd

    consts = {}
    if eps > 0:
        root = math.sqrt(eps)
        consts = {k: v / root for k, v in vals.items()}
    dim = s.dim
    return WitnessReport(
        eps_input=eps, r1=vals["r1"], r2=vals["r2"], r3=vals["r3"], r4=vals["r4"],
        r5=vals["r5"], commutator_defect=cd, measured_constants=consts, witnesses=wits,
        tol=tol, dim=dim, bound=10 * tol * dim, is_imitation=is_imitation(g).is_imitation,
        hypothesis_x2_a2=(g.x_count == 2 and g.a_count == 2))


def _require_perfect(s, g, tol):
    eps = epsilon_violation(correlation_from_tensor(s, g, tol), g)
    if eps > tol:
        raise NotPerfect(f"strategy is not perfect: epsilon_violation = {eps:.6g} > {tol:g}", eps)
    return eps


@dataclass
class IdentityReport:
    passed: bool
    pi_psi: float               # max |(pi (x) 1) psi - (1 (x) Q) psi|
    xi_psi: float               # max |(1 (x) xi) psi - (P (x) 1) psi|
    pi_orthogonality_k: float   # max |V*(pi_b pi_b' (x) 1)V|, b != b'
    pi_resolution_k: float      # |V*(sum_b pi_b (x) 1)V - 1|
    xi_orthogonality_k: float
    xi_resolution_k: float
    pi_orthogonality_full: float
    pi_resolution_full: float
    k_invariance_pi: float      # |(1 - P_K)(pi (x) 1)P_K|
    k_gap: float                # |P_{K_U} - P_{K_V}|
    dim_k: int
    dim_k_bob: int
    bound: float
    tol: float
    hypothesis_x2_a2: bool

    def to_dict(self):
        return dict(self.__dict__)


def restricted_identities(s: TensorStrategy, g: Game, tol=DEFAULT_TOL) -> IdentityReport:
    """Identities a perfect strategy must satisfy, on psi and on the cyclic subspace K.

    K is generated from psi by Alice's operators P (x) 1.  Orthogonality and
    resolution of the pi family are asserted only after compression to K;
    their full-space values are reported for information.
    """
    _require_imitation(g)
    _require_perfect(s, g, tol)
    ip = induce_projections(s, g, tol)
    m = s.psi_matrix
    X, Y, A, B = g.counts
    da, db = s.dim_a, s.dim_b
    ia, ib = np.eye(da), np.eye(db)

    pi_psi = max(fro(ip.pi[y, b] @ m - m @ s.bob[y, b].T) for y, b in np.ndindex(Y, B))
    xi_psi = max(fro(m @ ip.xi[x, a].T - s.alice[x, a] @ m) for x, a in np.ndindex(X, A))

    alice_gens = [np.kron(s.alice[x, a], ib) for x, a in np.ndindex(X, A)]
    bob_gens = [np.kron(ia, s.bob[y, b]) for y, b in np.ndindex(Y, B)]
    k = cyclic_subspace(alice_gens, s.psi, tol)
    kv = cyclic_subspace(bob_gens, s.psi, tol)
    pk = k.projector()

    def on_k(op_a=None, op_b=None):
        full = np.kron(op_a, ib) if op_a is not None else np.kron(ia, op_b)
        return k.compress(full)

    pi_orth_k = pi_orth_full = xi_orth_k = 0.0
    pi_res_k = pi_res_full = xi_res_k = 0.0
    inv = 0.0
    eye_k = np.eye(k.dim)
    for y in range(Y):
        for b, c in itertools.product(range(B), repeat=2):
            if b != c:
                prod = ip.pi[y, b] @ ip.pi[y, c]
                pi_orth_k = max(pi_orth_k, fro(on_k(op_a=prod)))
                pi_orth_full = max(pi_orth_full, fro(prod))
        total = ip.pi[y].sum(axis=0)
        pi_res_k = max(pi_res_k, fro(on_k(op_a=total) - eye_k))
        pi_res_full = max(pi_res_full, fro(total - ia))
        for b in range(B):
            inv = max(inv, fro((np.eye(pk.shape[0]) - pk) @ np.kron(ip.pi[y, b], ib) @ pk))
    for x in range(X):
        for a, c in itertools.product(range(A), repeat=2):
            if a != c:
                xi_orth_k = max(xi_orth_k, fro(on_k(op_b=ip.xi[x, a] @ ip.xi[x, c])))
        xi_res_k = max(xi_res_k, fro(on_k(op_b=ip.xi[x].sum(axis=0)) - eye_k))

    bound = 10 * tol * s.dim
    asserted = (pi_psi, xi_psi, pi_orth_k, pi_res_k)
    return IdentityReport(
        passed=all(v <= bound for v in asserted),
        pi_psi=pi_psi, xi_psi=xi_psi, pi_orthogonality_k=pi_orth_k, pi_resolution_k=pi_res_k,
        xi_orthogonality_k=xi_orth_k, xi_resolution_k=xi_res_k,
        pi_orthogonality_full=pi_orth_full, pi_resolution_full=pi_res_full,
        k_invariance_pi=inv, k_gap=fro(pk - kv.projector()), dim_k=k.dim, dim_k_bob=kv.dim,
        bound=bound, tol=tol, hypothesis_x2_a2=(X == 2 and A == 2))


def all_words(n_questions, n_answers, max_len):
    """All sequences of (question, answer) letters of length 0..max_len."""
    letters = list(itertools.product(range(n_questions), range(n_answers)))
    out = []
    for n in range(max_len + 1):
        out.extend(itertools.product(letters, repeat=n))
    return out


@dataclass
class WordReport:
    passed: bool
    max_discrepancy: float
    worst_word: tuple | None
    n_words: int
    bound: float

    def to_dict(self):
        return {"passed": self.passed, "max_discrepancy": self.max_discrepancy,
                "worst_word": [list(l) for l in self.worst_word] if self.worst_word is not None else None,
                "n_words": self.n_words, "bound": self.bound}


def word_discrepancy(s: TensorStrategy, xi, word) -> float:
    """|P_{a1}^{x1}...P_{an}^{xn} psi - xi_{an}^{xn}...xi_{a1}^{x1} psi|."""
    m = s.psi_matrix
    left = m
    for x, a in reversed(word):
        left = s.alice[x, a] @ left
    right = m
    for x, a in word:
        right = right @ xi[x, a].T
    return fro(left - right)


def word_reversal_check(s: TensorStrategy, g: Game, words=None, tol=DEFAULT_TOL,
                        max_len=DEFAULT_MAX_WORD) -> WordReport:
    """Alice words on psi versus reversed xi words on Bob's side.

    ``words`` defaults to every word of length <= max_len.
    """
    _require_imitation(g)
    _require_perfect(s, g, tol)
    if words is None:
        words = all_words(g.x_count, g.a_count, max_len)
    words = [tuple(tuple(l) for l in w) for w in words]
    for w in words:
        if len(w) > max_len:
            raise WordTooLong(f"word of length {len(w)} exceeds cap {max_len}")
    ip = induce_projections(s, g, tol)
    worst, worst_w = 0.0, None
    for w in words:
        d = word_discrepancy(s, ip.xi, w)
        if worst_w is None or d > worst:
            worst, worst_w = d, w
    bound = 10 * tol * s.dim
    return WordReport(worst <= bound, worst, worst_w, len(words), bound)


def reduced_state(s: TensorStrategy, side):
    m = s.psi_matrix
    if side == "alice":
        return m @ dagger(m)
    if side == "bob":
        return (dagger(m) @ m).T
    raise ValueError(f"side must be 'alice' or 'bob', got {side!r}")


def _word_values(rho, family, max_len):
    """tau(w) = tr(rho W) for every word w over the PVM family, keyed by word."""
    letters = list(np.ndindex(*family.shape[:2]))
    d = rho.shape[0]
    mats = {(): np.eye(d, dtype=np.complex128)}
    layer = {(): mats[()]}
    for _ in range(max_len):
        nxt = {}
        for w, mw in layer.items():
            for l in letters:
                nxt[w + (l,)] = mw @ family[l]
        mats.update(nxt)
        layer = nxt
    return {w: complex(np.trace(rho @ mw)) for w, mw in mats.items()}


@dataclass
class TraceReport:
    side: str
    max_len: int
    max_defect: float
    witness: tuple | None
    n_pairs: int
    bound: float
    passed: bool

    def to_dict(self):
        w = None
        if self.witness is not None:
            w = [[list(l) for l in part] for part in self.witness]
        return {"side": self.side, "max_len": self.max_len, "max_defect": self.max_defect,
                "witness": w, "n_pairs": self.n_pairs, "bound": self.bound, "passed": self.passed}


def _trace_defect(values, max_len):
    """max |tau(uv) - tau(vu)| over splits of every word of length <= max_len."""
    worst, witness, n = 0.0, None, 0
    for w, val in values.items():
        if len(w) > max_len:
            continue
        for k in range(len(w) + 1):
            n += 1
            rot = w[k:] + w[:k]
            d = abs(val - values[rot])
            if witness is None or d > worst:
                worst, witness = d, (w[:k], w[k:])
    return worst, witness, n


def trace_check(s: TensorStrategy, side="bob", max_len=3, tol=DEFAULT_TOL) -> TraceReport:
    """Traciality of the state restricted to one player's projections."""
    s.validate(tol)
    family = s.alice if side == "alice" else s.bob
    values = _word_values(reduced_state(s, side), family, max_len)
    worst, witness, n = _trace_defect(values, max_len)
    bound = 10 * tol * s.dim
    return TraceReport(side, max_len, worst, witness, n, bound, worst <= bound)


def loglog_slope(xs, ys, floor=0.0):
    """Least-squares slope of log(y) against log(x) over points with x, y > floor.

    Returns nan when fewer than two distinct x values qualify.
    """
    pts = [(x, y) for x, y in zip(xs, ys) if x > floor and y > floor]
    if len(pts) < 2:
        return float("nan")
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    if np.ptp(lx) == 0:
        return float("nan")
    return float(np.polyfit(lx, ly, 1)[0])


@dataclass
class ScanReport:
    eps: list
    commutator_defects: list
    cauchy_defects: list
    slope_vs_eps: float
    slope_vs_sqrt_eps: float
    n_words: int
    table: list = field(repr=False)

    def to_dict(self):
        def num(v):
            return None if isinstance(v, float) and math.isnan(v) else v
        return {"eps": self.eps, "commutator_defects": self.commutator_defects,
                "cauchy_defects": self.cauchy_defects,
                "slope_vs_eps": num(self.slope_vs_eps),
                "slope_vs_sqrt_eps": num(self.slope_vs_sqrt_eps),
                "n_words": self.n_words,
                "table": [[[v.real, v.imag] for v in row] for row in self.table]}


def state_convergence_scan(family, g: Game, max_len=2, tol=DEFAULT_TOL) -> ScanReport:
    """Evaluate tau_eps on tensor words along a family of strategies.

    ``family`` is ordered by decreasing epsilon_violation.  Tensor words are
    pairs (Alice word, Bob word) with total length <= max_len.  Commutator
    defects are the larger of the two one-sided trace defects; only points with
    eps > 0 and defect > tol enter the log-log slope, since values at rounding
    level carry no scaling information.
    """
    if not family:
        raise EmptyFamily("state_convergence_scan needs at least one strategy")
    a_words = all_words(g.x_count, g.a_count, max_len)
    b_words = all_words(g.y_count, g.b_count, max_len)
    pairs = [(u, v) for u in a_words for v in b_words if len(u) + len(v) <= max_len]
    table, eps_list, defects = [], [], []
    for s in family:
        eps_list.append(epsilon_violation(correlation_from_tensor(s, g, tol), g))
        m = s.psi_matrix
        row = []
        for u, v in pairs:
            mu = np.eye(s.dim_a)
            for l in u:
                mu = mu @ s.alice[l]
            mv = np.eye(s.dim_b)
            for l in v:
                mv = mv @ s.bob[l]
            row.append(complex(np.sum(m.conj() * (mu @ m @ mv.T))))
        table.append(row)
        defects.append(max(trace_check(s, side, max_len, tol).max_defect
                           for side in ("alice", "bob")))
    cauchy = [float(np.max(np.abs(np.array(table[i]) - np.array(table[i + 1]))))
              for i in range(len(table) - 1)]
    pts = [(e, d) for e, d in zip(eps_list, defects) if e > 0 and d > tol]
    slope = loglog_slope([p[0] for p in pts], [p[1] for p in pts])
    return ScanReport(eps_list, defects, cauchy, slope, 2 * slope, len(pairs), table)
