"""From a finite-dimensional tracial state and commuting generator images to correlations.

A ``TraceSpec`` is a density matrix ``rho`` defining tau(a) = tr(rho a).  A
``HomSpec`` gives the images E_a^x (Alice generators) and F_b^y (Bob
generators) in the same matrix algebra; the two families must commute.

Generator labels used in words and GNS representations are ``("a", x, a)``
and ``("b", y, b)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .correlations import Correlation, distance
from .errors import DimensionMismatch, InvalidState, NotCommuting, RealizationMismatch
from .game_model import Game, validate_game
from .linalg import (DEFAULT_TOL, check_pvm, dagger, fro, haar_unitary, op_norm,
                     pvm_from_unitary, psd_sqrt, rank_partition)
from .strategies import TensorStrategy, commutation_defect, correlation_from_tensor

REALIZATION_TOL = 1e-9


@dataclass
class TraceSpec:
    dim: int
    density: np.ndarray

    def __post_init__(self):
        self.density = np.asarray(self.density, dtype=np.complex128)

    @classmethod
    def normalized(cls, d):
        return cls(d, np.eye(d, dtype=np.complex128) / d)

    def validate(self, tol=DEFAULT_TOL):
        rho = self.density
        if rho.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"density has shape {rho.shape}, expected {(self.dim, self.dim)}")
        if fro(rho - dagger(rho)) > tol * self.dim:
            raise InvalidState("density is not Hermitian")
        w = np.linalg.eigvalsh((rho + dagger(rho)) / 2)
        if w.min() < -tol:
            raise InvalidState(f"density has negative eigenvalue {w.min()!r}")
        if abs(np.trace(rho).real - 1) > tol:
            raise InvalidState(f"density has trace {np.trace(rho).real!r}")
        return self

    def tau(self, m):
        return complex(np.trace(self.density @ m))


@dataclass
class HomSpec:
    dim: int
    alice: np.ndarray       # (X, A, d, d) images of e_a^x
    bob: np.ndarray         # (Y, B, d, d) images of f_b^y

    def __post_init__(self):
        self.alice = np.asarray(self.alice, dtype=np.complex128)
        self.bob = np.asarray(self.bob, dtype=np.complex128)

    def validate(self, tol=DEFAULT_TOL):
        d = self.dim
        for name, fam in (("alice", self.alice), ("bob", self.bob)):
            if fam.ndim != 4 or fam.shape[2:] != (d, d):
                raise DimensionMismatch(f"{name} generators have shape {fam.shape}, dim {d}")
            for pvm in fam:
                check_pvm(pvm, tol)
        defect, witness = commutation_defect(self.alice, self.bob)
        if defect > tol:
            raise NotCommuting(f"[E_a^x, F_b^y] = {defect:.6g} at (x,a,y,b)={witness}",
                               witness=witness, defect=defect)
        return self

    def generators(self):
        """Ordered mapping label -> matrix."""
        gens = {}
        for x, a in np.ndindex(*self.alice.shape[:2]):
            gens[("a", x, a)] = self.alice[x, a]
        for y, b in np.ndindex(*self.bob.shape[:2]):
            gens[("b", y, b)] = self.bob[y, b]
        return gens


def _check_dims(t: TraceSpec, h: HomSpec):
    if t.dim != h.dim:
        raise DimensionMismatch(f"trace dimension {t.dim} != homomorphism dimension {h.dim}")


def _words(labels, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(labels, repeat=n)


def _word_matrices(gens, max_len, d):
    mats = {(): np.eye(d, dtype=np.complex128)}
    layer = dict(mats)
    for _ in range(max_len):
        nxt = {w + (l,): m @ gens[l] for w, m in layer.items() for l in gens}
        mats.update(nxt)
        layer = nxt
    return mats


@dataclass
class TracePropertyReport:
    max_defect: float
    witness: tuple | None
    max_len: int
    n_pairs: int

    def to_dict(self):
        w = None if self.witness is None else [[list(l) for l in part] for part in self.witness]
        return {"max_defect": self.max_defect, "witness": w, "max_len": self.max_len,
                "n_pairs": self.n_pairs}


def trace_property_check(t: TraceSpec, h: HomSpec, max_len=2, tol=DEFAULT_TOL) -> TracePropertyReport:
    """max |tau(uv) - tau(vu)| over generator words with |u| + |v| <= max_len."""
    _check_dims(t, h)
    mats = _word_matrices(h.generators(), max_len, t.dim)
    vals = {w: t.tau(m) for w, m in mats.items()}
    worst, witness, n = 0.0, None, 0
    for w, v in vals.items():
        for k in range(len(w) + 1):
            n += 1
            d = abs(v - vals[w[k:] + w[:k]])
            if witness is None or d > worst:
                worst, witness = d, (w[:k], w[k:])
    return TracePropertyReport(float(worst), witness, max_len, n)


def correlation_from_trace(t: TraceSpec, h: HomSpec, g: Game, tol=DEFAULT_TOL) -> Correlation:
    """p(a,b|x,y) = tau(E_a^x F_b^y) = tr(rho E_a^x F_b^y)."""
    validate_game(g)
    _check_dims(t, h)
    if h.alice.shape[:2] != (g.x_count, g.a_count) or h.bob.shape[:2] != (g.y_count, g.b_count):
        raise DimensionMismatch(f"generator ranges {h.alice.shape[:2]}, {h.bob.shape[:2]} "
                                f"do not match game {g.counts}")
    t.validate(tol)
    h.validate(tol)
    p = np.einsum("ij,xajk,ybki->xyab", t.density, h.alice, h.bob)
    imag = float(np.abs(p.imag).max())
    if imag > tol:
        raise NotCommuting(f"tau(E F) has imaginary part {imag:.3e}")
    pr = p.real
    if pr.min() < -tol:
        raise InvalidState(f"negative probability {pr.min()!r}")
    return Correlation(np.clip(pr, 0.0, 1.0), tol)


@dataclass
class GnsResult:
    hilbert_dim: int
    psi: np.ndarray
    rep: dict               # label -> matrix on the GNS space
    max_word_error: float

    def rep_word(self, word):
        m = np.eye(self.hilbert_dim, dtype=np.complex128)
        for l in word:
            m = m @ self.rep[l]
        return m

    def to_dict(self):
        from .serialize import matrix_to_json, vector_to_json
        return {"hilbert_dim": self.hilbert_dim, "psi": vector_to_json(self.psi),
                "rep": [{"label": list(k), "matrix": matrix_to_json(v)} for k, v in self.rep.items()],
                "max_word_error": self.max_word_error}


def gns(t: TraceSpec, h: HomSpec, tol=DEFAULT_TOL, check_len=3) -> GnsResult:
    """GNS representation of tau restricted to the matrix algebra.

    The GNS space is M_d with <A, B> = tau(B* A), realized by A -> vec(A rho^1/2)
    in C^d (x) C^d; the null space of the form is removed by keeping only the
    eigenvectors W of rho with eigenvalue > tol, so the space is C^d (x) C^r
    with isometry 1 (x) conj(W).  Generators act by left multiplication,
    rep(X) = X (x) 1_r, and the cyclic vector is the class of the identity.
    """
    _check_dims(t, h)
    t.validate(tol)
    d = t.dim
    rho = (t.density + dagger(t.density)) / 2
    w, v = np.linalg.eigh(rho)
    keep = w > tol
    if keep.all():
        wmat = np.eye(d)
        sqrt_rho = psd_sqrt(rho)
    else:
        wmat = v[:, keep]
        sqrt_rho = (v[:, keep] * np.sqrt(w[keep])) @ dagger(v[:, keep])
    r = wmat.shape[1]
    iso = np.kron(np.eye(d), wmat.conj())              # (d*d, d*r)
    psi = dagger(iso) @ sqrt_rho.reshape(-1)
    eye_r = np.eye(r)
    rep = {label: np.kron(m, eye_r) for label, m in h.generators().items()}
    res = GnsResult(d * r, psi, rep, 0.0)
    gens = h.generators()
    worst = 0.0
    for word in _words(list(gens), check_len):
        m = np.eye(d, dtype=np.complex128)
        for l in word:
            m = m @ gens[l]
        err = abs(np.vdot(psi, res.rep_word(word) @ psi) - t.tau(m))
        worst = max(worst, err)
    res.max_word_error = float(worst)
    if worst > 10 * tol * d:
        raise RealizationMismatch(f"GNS vector state misses tau by {worst:.3e}")
    return res


def tensor_realization(t: TraceSpec, h: HomSpec, g: Game, tol=DEFAULT_TOL) -> TensorStrategy:
    """Tensor strategy on C^d (x) C^d reproducing tau(E F).

    psi = vec(rho^1/2) (row-major), Alice measures E on the left factor and
    Bob measures F^T on the right factor, so that
    <psi|E (x) F^T|psi> = tr(rho^1/2 E rho^1/2 F) = tr(rho E F) whenever rho
    commutes with F.
    """
    target = correlation_from_trace(t, h, g, tol)
    d = t.dim
    psi = psd_sqrt(t.density).reshape(-1)
    s = TensorStrategy(d, d, psi, h.alice.copy(), np.swapaxes(h.bob, -1, -2).copy())
    got = correlation_from_tensor(s, g, tol)
    gap = distance(got, target)
    if gap > REALIZATION_TOL:
        raise RealizationMismatch(
            f"realized correlation differs from tau(E F) by {gap:.3e}; "
            "the density probably does not commute with Bob's generators")
    return s


@dataclass
class AmenabilityReport:
    passed: bool
    n_pairs: int
    min_margin: float
    worst_pair: tuple | None
    values: list            # (|sigma|, bound) per pair

    def to_dict(self):
        w = None if self.worst_pair is None else [[list(l) for l in part] for part in self.worst_pair]
        return {"passed": self.passed, "n_pairs": self.n_pairs, "min_margin": self.min_margin,
                "worst_pair": w, "values": [list(v) for v in self.values]}


def amenability_functional(t: TraceSpec, h: HomSpec, words, tol=DEFAULT_TOL) -> AmenabilityReport:
    """sigma(u (x) v) = tau(uv) against the bound |u| |v| (operator norms).

    ``words`` is a list of (u, v) pairs of generator-label words.
    """
    _check_dims(t, h)
    t.validate(tol)
    gens = h.generators()
    d = t.dim

    def mat(word):
        m = np.eye(d, dtype=np.complex128)
        for l in word:
            m = m @ gens[tuple(l)]
        return m

    values, worst, worst_pair = [], None, None
    for u, v in words:
        mu, mv = mat(u), mat(v)
        sig = abs(t.tau(mu @ mv))
        bound = op_norm(mu) * op_norm(mv)
        margin = bound - sig
        values.append((float(sig), float(bound)))
        if worst is None or margin < worst:
            worst, worst_pair = margin, (tuple(map(tuple, u)), tuple(map(tuple, v)))
    min_margin = float(worst) if worst is not None else float("inf")
    return AmenabilityReport(min_margin >= -tol, len(values), min_margin, worst_pair, values)


def word_pairs(h: HomSpec, max_len):
    """All (u, v) generator word pairs with |u| + |v| <= max_len."""
    labels = list(h.generators())
    ws = list(_words(labels, max_len))
    return [(u, v) for u in ws for v in ws if len(u) + len(v) <= max_len]


def random_commuting_homspec(x_count, a_count, y_count, b_count, blocks, seed) -> HomSpec:
    """Commuting generator images in block-diagonal form.

    The space is the direct sum over blocks (m_k, n_k) of C^m_k (x) C^n_k;
    Alice's images act as E_k (x) 1 and Bob's as 1 (x) F_k, with E_k, F_k
    random PVMs drawn from ``numpy.random.default_rng(seed)``.
    """
    rng = np.random.default_rng(seed)
    d = sum(m * n for m, n in blocks)
    alice = np.zeros((x_count, a_count, d, d), dtype=np.complex128)
    bob = np.zeros((y_count, b_count, d, d), dtype=np.complex128)
    off = 0
    for m, n in blocks:
        sl = slice(off, off + m * n)
        for x in range(x_count):
            e = pvm_from_unitary(haar_unitary(m, rng), rank_partition(m, a_count))
            for a in range(a_count):
                alice[x, a, sl, sl] = np.kron(e[a], np.eye(n))
        for y in range(y_count):
            f = pvm_from_unitary(haar_unitary(n, rng), rank_partition(n, b_count))
            for b in range(b_count):
                bob[y, b, sl, sl] = np.kron(np.eye(m), f[b])
        off += m * n
    return HomSpec(d, alice, bob)
