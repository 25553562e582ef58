"""Canonical strategies and seeded instance generators used by tests, scripts and the CLI."""
from __future__ import annotations

import numpy as np

from .game_model import Game, is_imitation
from .linalg import angle_pvm, computational_pvm, haar_unitary, maximally_entangled
from .strategies import TensorStrategy

SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def copy_me_strategy():
    """Maximally entangled, computational-basis perfect strategy for the copy game."""
    pvm = computational_pvm(2)
    return TensorStrategy(2, 2, maximally_entangled(2), pvm[None], pvm[None])


def copy_product_strategy():
    """psi = |11>, deterministic answers 1 and 1."""
    psi = np.zeros(4, dtype=complex)
    psi[3] = 1.0
    pvm = computational_pvm(2)
    return TensorStrategy(2, 2, psi, pvm[None], pvm[None])


def copy_rotation_strategy(theta):
    """Copy-game strategy with Bob's measurement basis rotated by ``theta``."""
    return TensorStrategy(2, 2, maximally_entangled(2), computational_pvm(2)[None],
                          angle_pvm(theta)[None])


def chsh_optimal_strategy():
    alice = np.array([angle_pvm(0.0), angle_pvm(np.pi / 4)])
    bob = np.array([angle_pvm(np.pi / 8), angle_pvm(-np.pi / 8)])
    return TensorStrategy(2, 2, maximally_entangled(2), alice, bob)


def copy2_perfect_strategy():
    """Two-question copy game: computational and Hadamard bases on both sides."""
    fam = np.array([angle_pvm(0.0), angle_pvm(np.pi / 4)])
    return TensorStrategy(2, 2, maximally_entangled(2), fam, fam.copy())


def copy2_admixture_strategy(theta):
    """Perfect copy2 strategy with the state tilted towards vec(sigma_y)/sqrt(2).

    The admixture is orthogonal to the maximally entangled state and puts
    weight on losing tuples only at second order in theta.
    """
    phi = SIGMA_Y.reshape(-1) / np.sqrt(2)
    psi = np.cos(theta) * maximally_entangled(2) + np.sin(theta) * phi
    s = copy2_perfect_strategy()
    return TensorStrategy(2, 2, psi, s.alice, s.bob)


def _block_pvms(perms, n_out, anc):
    """PVM family P_a^q = sum_{k: perm_q[k] = a} |k><k| (x) 1_anc."""
    n = perms.shape[1]
    fam = np.zeros((len(perms), n_out, n * anc, n * anc), dtype=np.complex128)
    eye = np.eye(anc)
    for q, perm in enumerate(perms):
        for k in range(n):
            e = np.zeros((n, n))
            e[k, k] = 1.0
            fam[q, perm[k]] += np.kron(e, eye)
    return fam


def planted_perfect_instance(seed, max_questions=3, max_answers=3, max_ancilla=2,
                             extra_density=0.3):
    """Random imitation game together with an exact perfect tensor strategy.

    Deterministic strategies k -> (f_k, g_k) with f_k(x) = sigma_x[k] and
    g_k(y) = tau_y[k] are planted; the game wins exactly on the planted tuples
    plus randomly added tuples that keep the imitation property.  The strategy
    is the coherent superposition sum_k c_k |k>|k> (x) chi_k, conjugated by
    Haar-random local unitaries.
    """
    rng = np.random.default_rng(seed)
    X = int(rng.integers(1, max_questions + 1))
    Y = int(rng.integers(1, max_questions + 1))
    n = int(rng.integers(2, max_answers + 1))
    r = int(rng.integers(1, max_ancilla + 1))
    sig = np.array([rng.permutation(n) for _ in range(X)])
    tau = np.array([rng.permutation(n) for _ in range(Y)])

    lam = np.zeros((X, Y, n, n), dtype=np.int8)
    for x in range(X):
        for y in range(Y):
            lam[x, y, sig[x], tau[y]] = 1
    candidates = np.argwhere(lam == 0)
    rng.shuffle(candidates)
    for t in candidates:
        if rng.random() < extra_density:
            lam[tuple(t)] = 1
            if not is_imitation(Game(X, Y, n, n, lam)).is_imitation:
                lam[tuple(t)] = 0
    game = Game(X, Y, n, n, lam)

    weights = rng.random(n) + 0.1
    weights /= weights.sum()
    d = n * r
    psi_m = np.zeros((d, d), dtype=np.complex128)
    for k in range(n):
        chi = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
        chi /= np.linalg.norm(chi)
        psi_m[k * r:(k + 1) * r, k * r:(k + 1) * r] = np.sqrt(weights[k]) * chi
    s = TensorStrategy(d, d, psi_m.reshape(-1), _block_pvms(sig, n, r), _block_pvms(tau, n, r))
    u = haar_unitary(d, rng)
    v = haar_unitary(d, rng)
    return game, s.conjugated(u, v)
