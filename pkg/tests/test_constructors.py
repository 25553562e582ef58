import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlgames.constructors import (HomSpec, TraceSpec, amenability_functional, correlation_from_trace,
                                  gns, random_commuting_homspec, tensor_realization,
                                  trace_property_check, word_pairs)
from nlgames.correlations import distance, is_nonsignalling
from nlgames.errors import DimensionMismatch, NotCommuting, RealizationMismatch
from nlgames.game_model import Game, copy_game
from nlgames.instances import copy_me_strategy
from nlgames.linalg import angle_pvm, computational_pvm, maximally_entangled, random_pvm
from nlgames.strategies import correlation_from_tensor

seeds = st.integers(0, 2**31 - 1)
PPLUS = np.full((2, 2), 0.5)
PPLUS_I = np.array([[0.5, -0.5j], [0.5j, 0.5]])      # projector onto (|0> + i|1>)/sqrt(2)


def trivial_bob(d):
    return np.eye(d)[None, None]


def computational_hom(d=2):
    c = computational_pvm(d)
    return HomSpec(d, c[None], c[None])


def ones_game(x, y, a, b):
    return Game(x, y, a, b, np.ones((x, y, a, b)))


@st.composite
def commuting_instances(draw):
    x, a, y, b = (draw(st.integers(1, 3)) for _ in range(4))
    blocks = [(draw(st.integers(1, 3)), draw(st.integers(1, 3)))
              for _ in range(draw(st.integers(1, 3)))]
    h = random_commuting_homspec(x, a, y, b, blocks, draw(seeds))
    return h, ones_game(x, y, a, b)


# trace property

def test_normalized_trace_defect_zero():
    rng = np.random.default_rng(0)
    h = HomSpec(3, np.array([random_pvm(3, 2, rng) for _ in range(2)]), trivial_bob(3))
    for max_len in (1, 2, 3, 4):
        assert trace_property_check(TraceSpec.normalized(3), h, max_len).max_defect <= 1e-12


def test_length_one_defect_zero():
    h = HomSpec(2, np.array([computational_pvm(2), angle_pvm(np.pi / 4)]), trivial_bob(2))
    assert trace_property_check(TraceSpec(2, np.diag([1.0, 0.0])), h, 1).max_defect == 0.0


def test_vector_state_real_generators():
    # tau(uv) - tau(vu) = 2i Im tau(uv) vanishes for real matrices; length 3 separates
    h = HomSpec(2, np.array([computational_pvm(2), angle_pvm(np.pi / 4)]), trivial_bob(2))
    t = TraceSpec(2, np.diag([1.0, 0.0]))
    assert trace_property_check(t, h, 2).max_defect <= 1e-15
    # tau(P+ P+ P0) = 1/2 versus tau(P+ P0 P+) = 1/4
    assert abs(trace_property_check(t, h, 3).max_defect - 0.25) <= 1e-12


def test_vector_state_complex_generators_length_two():
    # tau(P+ P+i) = 1/4 - i/4, so |tau(uv) - tau(vu)| = 1/2
    alice = np.array([[PPLUS, np.eye(2) - PPLUS], [PPLUS_I, np.eye(2) - PPLUS_I]])
    h = HomSpec(2, alice, trivial_bob(2))
    t = TraceSpec(2, np.diag([1.0, 0.0]))
    assert abs(trace_property_check(t, h, 2).max_defect - 0.5) <= 1e-12


def test_trace_property_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        trace_property_check(TraceSpec.normalized(3), computational_hom(2))


# correlation from trace

def test_copy_correlation_from_normalized_trace():
    c = correlation_from_trace(TraceSpec.normalized(2), computational_hom(), copy_game())
    assert np.allclose(c.p[0, 0], np.eye(2) / 2, atol=1e-15)


def test_trivial_bob_gives_marginal():
    rng = np.random.default_rng(4)
    e = random_pvm(3, 3, rng)
    t = TraceSpec.normalized(3)
    c = correlation_from_trace(t, HomSpec(3, e[None], trivial_bob(3)), ones_game(1, 1, 3, 1))
    for a in range(3):
        assert abs(c.p[0, 0, a, 0] - t.tau(e[a]).real) <= 1e-12


def test_singular_density_product_correlation():
    c = correlation_from_trace(TraceSpec(2, np.diag([1.0, 0.0])), computational_hom(), copy_game())
    assert np.array_equal(c.p[0, 0], np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_noncommuting_hom_rejected():
    h = HomSpec(2, computational_pvm(2)[None], angle_pvm(np.pi / 4)[None])
    with pytest.raises(NotCommuting):
        correlation_from_trace(TraceSpec.normalized(2), h, copy_game())


# gns

def test_gns_normalized_d2():
    r = gns(TraceSpec.normalized(2), computational_hom())
    assert r.hilbert_dim == 4
    assert np.abs(r.psi - maximally_entangled(2)).max() <= 1e-15


def test_gns_singular_density_quotient():
    r = gns(TraceSpec(2, np.diag([1.0, 0.0])), computational_hom())
    assert r.hilbert_dim == 2
    assert r.max_word_error <= 1e-12


def test_gns_rep_is_multiplicative():
    h = random_commuting_homspec(2, 2, 2, 2, [(2, 1), (1, 2)], 3)
    r = gns(TraceSpec.normalized(h.dim), h)
    gens = h.generators()
    for u in gens:
        for v in gens:
            assert np.array_equal(r.rep_word((u, v)), r.rep[u] @ r.rep[v])
            assert np.abs(r.rep[u] @ r.rep[v] - np.kron(gens[u] @ gens[v], np.eye(h.dim))).max() <= 1e-15


@settings(max_examples=15)
@given(seeds, st.integers(2, 4))
def test_gns_fidelity_random_density(seed, d):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    h = HomSpec(d, np.array([random_pvm(d, 2, rng)]), trivial_bob(d))
    assert gns(TraceSpec(d, rho), h).max_word_error <= 1e-9


# tensor realization

def test_realization_normalized_copy_is_me_strategy():
    s = tensor_realization(TraceSpec.normalized(2), computational_hom(), copy_game())
    ref = copy_me_strategy()
    assert np.abs(s.psi - ref.psi).max() <= 1e-15
    assert np.array_equal(s.alice, ref.alice) and np.array_equal(s.bob, ref.bob)


def test_realization_half_density_state():
    h = random_commuting_homspec(1, 2, 1, 2, [(1, 2)], 9)
    s = tensor_realization(TraceSpec(2, np.diag([0.5, 0.5])), h, ones_game(1, 1, 2, 2))
    assert np.abs(s.psi - maximally_entangled(2)).max() <= 1e-15


def test_realization_diagonal_closed_form():
    # diagonal PVMs on C^3: p = sum_k E[k,k] F[k,k] / 3
    e = np.array([np.diag(v) for v in ([1, 1, 0], [0, 0, 1])], dtype=complex)
    f = np.array([np.diag(v) for v in ([1, 0, 0], [0, 1, 1])], dtype=complex)
    h = HomSpec(3, e[None], f[None])
    g = ones_game(1, 1, 2, 2)
    s = tensor_realization(TraceSpec.normalized(3), h, g)
    p = correlation_from_tensor(s, g).p[0, 0]
    expected = np.array([[np.diag(ea).real @ np.diag(fb).real / 3 for fb in f] for ea in e])
    assert np.abs(p - expected).max() <= 1e-12


def test_realization_mismatch_when_density_does_not_commute():
    # E (x) 1 and 1 (x) F on C^2 (x) C^2 with a generic real density
    e = np.array([np.kron(p, np.eye(2)) for p in computational_pvm(2)])
    f = np.array([np.kron(np.eye(2), p) for p in angle_pvm(np.pi / 4)])
    m = np.random.default_rng(1).standard_normal((4, 4))
    rho = m @ m.T / np.trace(m @ m.T)
    with pytest.raises(RealizationMismatch):
        tensor_realization(TraceSpec(4, rho), HomSpec(4, e[None], f[None]), ones_game(1, 1, 2, 2))


@settings(max_examples=30)
@given(commuting_instances())
def test_round_trip_property(inst):
    h, g = inst
    t = TraceSpec.normalized(h.dim)
    target = correlation_from_trace(t, h, g)
    s = tensor_realization(t, h, g)
    assert distance(correlation_from_tensor(s, g), target) <= 1e-9
    assert is_nonsignalling(target, 1e-9).passed


@settings(max_examples=20)
@given(commuting_instances())
def test_gns_fidelity_property(inst):
    h, _ = inst
    assert gns(TraceSpec.normalized(h.dim), h).max_word_error <= 1e-9


# amenability

def test_amenability_identity_pair():
    r = amenability_functional(TraceSpec.normalized(2), computational_hom(), [((), ())])
    assert r.values == [(1.0, 1.0)] and r.min_margin == 0.0


def test_amenability_projection_and_identity():
    h = computational_hom()
    r = amenability_functional(TraceSpec.normalized(2), h, [((("a", 0, 0),), ())])
    sig, bound = r.values[0]
    assert 0 <= sig <= 1 == bound


def test_amenability_random_words_d4():
    h = random_commuting_homspec(2, 2, 2, 2, [(2, 2)], 5)
    pairs = word_pairs(h, 3)
    r = amenability_functional(TraceSpec.normalized(4), h, pairs)
    assert r.passed and r.n_pairs == len(pairs)
    assert all(sig <= bound + 1e-12 for sig, bound in r.values)
