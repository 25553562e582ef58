"""Tensor-product, commuting-operator and deterministic strategies.

A tensor strategy stores its state as a flat vector on H_A (x) H_B with the
row-major convention ``psi[i * dim_b + j]``.  Internally it is often easier to
view psi as the ``dim_a x dim_b`` matrix ``Psi``; then

    (A (x) 1) psi  <->  A @ Psi
    (1 (x) B) psi  <->  Psi @ B.T
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlations import Correlation
from .errors import (DimensionMismatch, InvalidPvm, InvalidState, InvalidStrategy,
                     NotCommuting, RangeError)
from .game_model import Game, validate_game
from .linalg import (DEFAULT_TOL, check_pvm, check_state, dagger, fro, haar_unitary,
                     pvm_from_unitary, rank_partition)

# Bumped whenever random_tensor_strategy changes its draw order.
RANDOM_STRATEGY_VERSION = 1
IMAG_TOL = 1e-10


@dataclass
class TensorStrategy:
    dim_a: int
    dim_b: int
    psi: np.ndarray
    alice: np.ndarray       # (X, A, dim_a, dim_a)
    bob: np.ndarray         # (Y, B, dim_b, dim_b)

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=np.complex128)
        self.alice = np.asarray(self.alice, dtype=np.complex128)
        self.bob = np.asarray(self.bob, dtype=np.complex128)

    @property
    def dim(self):
        return self.dim_a * self.dim_b

    @property
    def psi_matrix(self):
        return self.psi.reshape(self.dim_a, self.dim_b)

    def validate(self, tol=DEFAULT_TOL):
        if self.psi.shape != (self.dim_a * self.dim_b,):
            raise DimensionMismatch(
                f"psi has shape {self.psi.shape}, expected ({self.dim_a * self.dim_b},)")
        if self.alice.ndim != 4 or self.alice.shape[2:] != (self.dim_a, self.dim_a):
            raise DimensionMismatch(f"alice PVMs have shape {self.alice.shape}")
        if self.bob.ndim != 4 or self.bob.shape[2:] != (self.dim_b, self.dim_b):
            raise DimensionMismatch(f"bob PVMs have shape {self.bob.shape}")
        _check_families(self.alice, self.bob, self.psi, tol)
        return self

    def embed(self):
        """The same strategy as commuting operators P (x) 1, 1 (x) Q."""
        ia, ib = np.eye(self.dim_a), np.eye(self.dim_b)
        alice = np.einsum("xaij,kl->xaikjl", self.alice, ib).reshape(
            *self.alice.shape[:2], self.dim, self.dim)
        bob = np.einsum("ij,ybkl->ybikjl", ia, self.bob).reshape(
            *self.bob.shape[:2], self.dim, self.dim)
        return CommutingStrategy(self.dim, self.psi.copy(), alice, bob)

    def conjugated(self, u, v):
        """Apply local unitaries: P -> U P U*, Q -> V Q V*, psi -> (U (x) V) psi."""
        alice = u @ self.alice @ dagger(u)
        bob = v @ self.bob @ dagger(v)
        psi = (u @ self.psi_matrix @ v.T).reshape(-1)
        return TensorStrategy(self.dim_a, self.dim_b, psi, alice, bob)


@dataclass
class CommutingStrategy:
    dim: int
    psi: np.ndarray
    alice: np.ndarray       # (X, A, dim, dim)
    bob: np.ndarray         # (Y, B, dim, dim)

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=np.complex128)
        self.alice = np.asarray(self.alice, dtype=np.complex128)
        self.bob = np.asarray(self.bob, dtype=np.complex128)

    def validate(self, tol=DEFAULT_TOL):
        d = self.dim
        if self.psi.shape != (d,):
            raise DimensionMismatch(f"psi has shape {self.psi.shape}, expected ({d},)")
        for name, fam in (("alice", self.alice), ("bob", self.bob)):
            if fam.ndim != 4 or fam.shape[2:] != (d, d):
                raise DimensionMismatch(f"{name} PVMs have shape {fam.shape}")
        _check_families(self.alice, self.bob, self.psi, tol)
        defect, witness = commutation_defect(self.alice, self.bob)
        if defect > tol:
            raise NotCommuting(
                f"[P_a^x, Q_b^y] has Frobenius norm {defect:.6g} at (x,a,y,b)={witness}",
                witness=witness, defect=defect)
        return self


@dataclass(frozen=True)
class DeterministicStrategy:
    f: tuple
    g: tuple

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(v) for v in self.f))
        object.__setattr__(self, "g", tuple(int(v) for v in self.g))


def _check_families(alice, bob, psi, tol):
    try:
        check_state(psi, tol)
    except InvalidState as exc:
        raise InvalidStrategy(str(exc)) from None
    for name, fam in (("alice", alice), ("bob", bob)):
        for q, pvm in enumerate(fam):
            try:
                check_pvm(pvm, tol)
            except InvalidPvm as exc:
                raise InvalidStrategy(f"{name} question {q}: {exc}") from None


def commutation_defect(alice, bob):
    """max_{x,a,y,b} |[P_a^x, Q_b^y]|_F and the (x, a, y, b) attaining it."""
    worst, witness = 0.0, None
    for x, a in np.ndindex(*alice.shape[:2]):
        p = alice[x, a]
        for y, b in np.ndindex(*bob.shape[:2]):
            q = bob[y, b]
            d = fro(p @ q - q @ p)
            if witness is None or d > worst:
                worst, witness = d, (x, a, y, b)
    return worst, witness


def _check_game_shape(alice, bob, g: Game):
    validate_game(g)
    if alice.shape[:2] != (g.x_count, g.a_count) or bob.shape[:2] != (g.y_count, g.b_count):
        raise DimensionMismatch(
            f"strategy index ranges alice {alice.shape[:2]}, bob {bob.shape[:2]} "
            f"do not match game counts {g.counts}")


def _finish(p_complex, tol) -> Correlation:
    imag = float(np.abs(p_complex.imag).max())
    if imag > IMAG_TOL:
        raise InvalidStrategy(f"correlation has imaginary part {imag:.3e}")
    p = p_complex.real.copy()
    if p.min() < -tol or p.max() > 1 + tol:
        raise InvalidStrategy(f"probabilities outside [0,1]: {p.min()!r}, {p.max()!r}")
    p = np.clip(p, 0.0, 1.0)
    sums = p.sum(axis=(2, 3))
    if np.abs(sums - 1).max() > tol:
        raise InvalidStrategy(f"slice sums deviate from 1 by {np.abs(sums - 1).max():.3e}")
    return Correlation(p, tol)


def correlation_from_tensor(s: TensorStrategy, g: Game, tol=DEFAULT_TOL) -> Correlation:
    """p(a,b|x,y) = <psi| P_a^x (x) Q_b^y |psi>."""
    _check_game_shape(s.alice, s.bob, g)
    s.validate(tol)
    m = s.psi_matrix
    # <psi|P (x) Q|psi> = sum conj(Psi[i,m]) P[i,j] Psi[j,l] Q[m,l]
    p_psi = np.einsum("xaij,jl->xail", s.alice, m)
    p = np.einsum("im,xail,ybml->xyab", m.conj(), p_psi, s.bob)
    return _finish(p, tol)


def correlation_from_commuting(s: CommutingStrategy, g: Game, tol=DEFAULT_TOL) -> Correlation:
    """p(a,b|x,y) = <psi| P_a^x Q_b^y |psi> for commuting PVMs on one space."""
    _check_game_shape(s.alice, s.bob, g)
    s.validate(tol)
    qpsi = np.einsum("ybij,j->ybi", s.bob, s.psi)
    ppsi = np.einsum("xaij,j->xai", s.alice, s.psi)
    # P Hermitian: <psi|P Q psi> = <P psi, Q psi>
    p = np.einsum("xai,ybi->xyab", ppsi.conj(), qpsi)
    if float(np.abs(p.imag).max()) > tol:
        raise InvalidStrategy(f"imaginary part {np.abs(p.imag).max():.3e} exceeds tol")
    return _finish(p, tol)


def correlation_from_deterministic(d: DeterministicStrategy, g: Game) -> Correlation:
    validate_game(g)
    if len(d.f) != g.x_count or len(d.g) != g.y_count:
        raise RangeError(f"strategy defined on {len(d.f)}x{len(d.g)} questions, "
                         f"game has {g.x_count}x{g.y_count}")
    if any(not 0 <= v < g.a_count for v in d.f) or any(not 0 <= v < g.b_count for v in d.g):
        raise RangeError(f"answers out of range: f={d.f}, g={d.g}")
    p = np.zeros(g.counts)
    for x, a in enumerate(d.f):
        for y, b in enumerate(d.g):
            p[x, y, a, b] = 1.0
    return Correlation(p)


def random_tensor_strategy(g: Game, dim_a, dim_b, seed) -> TensorStrategy:
    """Seeded random tensor strategy (generator version 1).

    Draw order from ``numpy.random.default_rng(seed)``: one Haar unitary per
    Alice question, then one per Bob question, then psi as a normalized
    complex Gaussian (real parts then imaginary parts).  Each PVM splits the
    unitary's columns by ``rank_partition``.
    """
    validate_game(g)
    rng = np.random.default_rng(seed)
    alice = np.array([pvm_from_unitary(haar_unitary(dim_a, rng), rank_partition(dim_a, g.a_count))
                      for _ in range(g.x_count)])
    bob = np.array([pvm_from_unitary(haar_unitary(dim_b, rng), rank_partition(dim_b, g.b_count))
                    for _ in range(g.y_count)])
    n = dim_a * dim_b
    psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    psi /= np.linalg.norm(psi)
    return TensorStrategy(dim_a, dim_b, psi, alice, bob)
