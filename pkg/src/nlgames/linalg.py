"""Dense complex linear algebra: projections, PVMs, tensor products, meets.

Matrices are plain ``numpy`` complex128 arrays.  A PVM is an array of shape
``(n_outcomes, d, d)``; a family of PVMs indexed by question has shape
``(n_questions, n_outcomes, d, d)``.

All tolerances are explicit keyword arguments; ``DEFAULT_TOL`` is the
validation tolerance used when none is given.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidPvm, InvalidState, NotAProjection

DEFAULT_TOL = 1e-8
MEET_EIG_TOL = 1e-7     # per projection in the meet


def as_cmatrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got array of shape {m.shape}")
    return m


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def fro(m) -> float:
    return float(np.linalg.norm(m))


def tensor(a, b) -> np.ndarray:
    """Kronecker product; row index of the result is ``i_a * rows_b + i_b``."""
    return np.kron(a, b)


def projection_defects(m):
    """(hermiticity defect, idempotency defect), both Frobenius norms."""
    return fro(m - dagger(m)), fro(m @ m - m)


def check_projection(m, tol=DEFAULT_TOL) -> np.ndarray:
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"projection must be square, got {m.shape}")
    d = m.shape[0]
    herm, idem = projection_defects(m)
    if herm > tol * d or idem > tol * d:
        raise NotAProjection(
            f"not a projection: |M-M*|={herm:.3e}, |M^2-M|={idem:.3e}, bound {tol * d:.3e}")
    return m


def pvm_defects(elems):
    """(max |P_i P_j| over i != j, |sum P_i - 1|), Frobenius norms."""
    elems = np.asarray(elems, dtype=np.complex128)
    n, d = elems.shape[0], elems.shape[1]
    worst = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                worst = max(worst, fro(elems[i] @ elems[j]))
    return worst, fro(elems.sum(axis=0) - np.eye(d))


def check_pvm(elems, tol=DEFAULT_TOL) -> np.ndarray:
    elems = np.asarray(elems, dtype=np.complex128)
    if elems.ndim != 3 or elems.shape[1] != elems.shape[2]:
        raise DimensionMismatch(f"PVM must have shape (n, d, d), got {elems.shape}")
    for k, p in enumerate(elems):
        try:
            check_projection(p, tol)
        except NotAProjection as exc:
            raise InvalidPvm(f"element {k}: {exc}") from None
    orth, res = pvm_defects(elems)
    if orth > tol:
        raise InvalidPvm(f"PVM elements not orthogonal: max |P_i P_j| = {orth:.3e}")
    if res > tol:
        raise InvalidPvm(f"PVM does not resolve the identity: |sum - 1| = {res:.3e}")
    return elems


def check_state(psi, tol=DEFAULT_TOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 1:
        raise DimensionMismatch(f"state must be a vector, got shape {psi.shape}")
    n = np.linalg.norm(psi)
    if abs(n - 1.0) > tol:
        raise InvalidState(f"state vector has norm {n!r}, not 1")
    return psi


def meet_of_projections(ps, tol=DEFAULT_TOL, tol_eig=None) -> np.ndarray:
    """Orthogonal projection onto the intersection of the ranges of ``ps``.

    The intersection is the eigenspace of ``sum(ps)`` for eigenvalue n (the
    count); eigenvalues >= n - tol_eig are accepted.  ``tol_eig`` defaults to
    ``MEET_EIG_TOL * n``.
    """
    ps = [as_cmatrix(p) for p in ps]
    if not ps:
        raise DimensionMismatch("meet of an empty family is undefined here")
    d = ps[0].shape[0]
    for p in ps:
        if p.shape != (d, d):
            raise DimensionMismatch(f"projection shapes differ: {p.shape} vs {(d, d)}")
        check_projection(p, tol)
    n = len(ps)
    if n == 1:
        return ps[0].copy()
    if tol_eig is None:
        tol_eig = MEET_EIG_TOL * n
    s = sum(ps)
    s = (s + dagger(s)) / 2
    w, v = np.linalg.eigh(s)
    keep = v[:, w >= n - tol_eig]
    return keep @ dagger(keep)


def range_contained(small, big, tol=DEFAULT_TOL) -> float:
    """Defect |S B S - S| certifying range(S) <= range(B)."""
    return fro(small @ big @ small - small)


@dataclass
class CyclicSubspace:
    ambient_dim: int
    basis: np.ndarray       # (ambient_dim, k), orthonormal columns

    @property
    def dim(self):
        return self.basis.shape[1]

    def projector(self):
        return self.basis @ dagger(self.basis)

    def compress(self, op):
        """Matrix of ``op`` compressed to the subspace, V* op V."""
        return dagger(self.basis) @ op @ self.basis


def _orthogonalize(w, basis):
    # two passes of modified Gram-Schmidt
    for _ in range(2):
        for b in basis:
            w = w - np.vdot(b, w) * b
    return w


def cyclic_subspace(gens, psi, tol=DEFAULT_TOL) -> CyclicSubspace:
    """Smallest subspace containing ``psi`` and invariant under ``gens``.

    Breadth-first closure: each round applies every generator to the vectors
    added in the previous round and keeps residuals of norm >= tol.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    dim = psi.shape[0]
    gens = [as_cmatrix(g) for g in gens]
    for g in gens:
        if g.shape != (dim, dim):
            raise DimensionMismatch(f"generator shape {g.shape} does not match state dim {dim}")
    basis = []
    w = psi / np.linalg.norm(psi)
    basis.append(w)
    frontier = [w]
    while frontier and len(basis) < dim:
        new = []
        for v in frontier:
            for g in gens:
                w = _orthogonalize(g @ v, basis)
                nrm = np.linalg.norm(w)
                if nrm >= tol:
                    w = w / nrm
                    basis.append(w)
                    new.append(w)
                    if len(basis) == dim:
                        break
            if len(basis) == dim:
                break
        frontier = new
    return CyclicSubspace(dim, np.stack(basis, axis=1))


def haar_unitary(dim, rng) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian, phases of diag(R) fixed."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    ph = d / np.abs(d)
    return q * ph


def rank_partition(dim, n):
    """Sizes of a fixed split of ``dim`` basis vectors into ``n`` blocks."""
    return [dim // n + (1 if i < dim % n else 0) for i in range(n)]


def pvm_from_unitary(u, sizes) -> np.ndarray:
    d = u.shape[0]
    out = np.zeros((len(sizes), d, d), dtype=np.complex128)
    start = 0
    for i, s in enumerate(sizes):
        cols = u[:, start:start + s]
        out[i] = cols @ dagger(cols)
        start += s
    return out


def random_pvm(dim, n, rng) -> np.ndarray:
    return pvm_from_unitary(haar_unitary(dim, rng), rank_partition(dim, n))


def computational_pvm(dim, n=None) -> np.ndarray:
    """Rank-one computational basis projections (n defaults to dim)."""
    n = dim if n is None else n
    out = np.zeros((n, dim, dim), dtype=np.complex128)
    for i in range(min(n, dim)):
        out[i, i, i] = 1.0
    return out


def angle_pvm(theta) -> np.ndarray:
    """Real qubit PVM onto (cos t, sin t) and its orthogonal complement."""
    v0 = np.array([np.cos(theta), np.sin(theta)])
    v1 = np.array([-np.sin(theta), np.cos(theta)])
    return np.array([np.outer(v0, v0), np.outer(v1, v1)], dtype=np.complex128)


def maximally_entangled(d) -> np.ndarray:
    return np.eye(d, dtype=np.complex128).reshape(-1) / np.sqrt(d)


def psd_sqrt(m, tol=0.0) -> np.ndarray:
    m = (m + dagger(m)) / 2
    w, v = np.linalg.eigh(m)
    w = np.where(w > tol, w, 0.0)
    return (v * np.sqrt(w)) @ dagger(v)


def op_norm(m) -> float:
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))
