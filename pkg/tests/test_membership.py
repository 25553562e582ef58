import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlgames.correlations import epsilon_violation, is_nonsignalling, is_perfect
from nlgames.errors import DimensionMismatch, SearchSpaceTooLarge
from nlgames.game_model import (Game, all_game, chsh_game, copy_game, copy2_game, none_game,
                                parity_game)
from nlgames.membership import (build_ns_lp, classical_perfect, classical_search, ns_feasible,
                                seesaw, seesaw_value)
from nlgames.simplex import LpProblem, phase1
from nlgames.strategies import correlation_from_deterministic

from oracles import chsh_angle_sweep, classical_bruteforce, ns_feasible_scipy


@st.composite
def small_games(draw, max_count=2, max_answers=3):
    counts = [draw(st.integers(1, max_count)), draw(st.integers(1, max_count)),
              draw(st.integers(1, max_answers)), draw(st.integers(1, max_answers))]
    n = int(np.prod(counts))
    density = draw(st.sampled_from([0.3, 0.5, 0.7]))
    bits = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    flips = draw(st.lists(st.floats(0, 1), min_size=n, max_size=n))
    lam = np.array([b and f < density * 2 for b, f in zip(bits, flips)], dtype=np.int8)
    return Game(*counts, lam.reshape(counts))


# simplex

def test_phase1_simple_feasible():
    lp = LpProblem(2, [[1, 1]], [1])
    r = phase1(lp)
    assert r.feasible and abs(r.x.sum() - 1) <= 1e-12


def test_phase1_infeasible():
    lp = LpProblem(2, [[1, 1], [1, 1]], [1, 2])
    assert not phase1(lp).feasible


def test_phase1_negative_rhs():
    r = phase1(LpProblem(1, [[-1]], [-3]))
    assert r.feasible and abs(r.x[0] - 3) <= 1e-12


def test_lp_dimension_check():
    with pytest.raises(DimensionMismatch):
        LpProblem(2, [[1, 1]], [1, 2])


# ns feasibility

def test_ns_none_infeasible():
    r = ns_feasible(none_game())
    assert not r.feasible and r.witness is None


def test_ns_copy_feasible():
    r = ns_feasible(copy_game())
    assert r.feasible
    assert is_perfect(r.witness, copy_game()).passed


def test_ns_chsh_pr_box():
    r = ns_feasible(chsh_game())
    assert r.feasible
    assert np.abs(r.witness.p - 0.5 * chsh_game().lam).max() <= 1e-12
    assert is_nonsignalling(r.witness, 1e-8).passed
    assert is_perfect(r.witness, chsh_game(), 1e-8).passed


def test_ns_lp_row_count():
    lp = build_ns_lp(chsh_game())
    # 4 normalizations + 4 alice + 4 bob marginal rows + 8 zero pins
    assert lp.a_eq.shape == (20, 16)


@settings(max_examples=60)
@given(small_games())
def test_ns_agrees_with_scipy_oracle(g):
    r = ns_feasible(g)
    assert r.feasible == ns_feasible_scipy(g.lam)
    if r.feasible:
        assert is_nonsignalling(r.witness, 1e-8).passed
        assert is_perfect(r.witness, g, 1e-8).passed


# classical search

def test_classical_examples():
    s = classical_perfect(copy_game())
    assert s.f == (0,) and s.g == (0,)
    assert classical_perfect(chsh_game()) is None
    s = classical_perfect(all_game())
    assert s.f == (0, 0) and s.g == (0, 0)


def test_classical_chsh_visits_sixteen():
    r = classical_search(chsh_game())
    assert r.strategy is None and r.visited == 16 == r.total


def test_classical_parity_and_copy2():
    assert classical_perfect(parity_game()) is not None
    assert classical_perfect(copy2_game()) is not None


def test_classical_cap():
    with pytest.raises(SearchSpaceTooLarge):
        classical_search(Game(3, 3, 4, 4, np.ones((3, 3, 4, 4))), cap=1000)


@settings(max_examples=60)
@given(small_games(max_count=3))
def test_classical_matches_naive_scan(g):
    r = classical_search(g)
    found, visited = classical_bruteforce(g.lam)
    assert r.visited == visited
    if found is None:
        assert r.strategy is None
    else:
        assert (r.strategy.f, r.strategy.g) == found
        assert epsilon_violation(correlation_from_deterministic(r.strategy, g), g) == 0.0


@settings(max_examples=60)
@given(small_games())
def test_classical_implies_ns(g):
    if classical_perfect(g) is not None:
        assert ns_feasible(g).feasible


# seesaw

def test_seesaw_all_game_one_iteration():
    assert abs(seesaw_value(all_game(), 2, 1, 0) - 1.0) <= 1e-12


def test_seesaw_copy_perfect():
    assert abs(seesaw_value(copy_game(), 2, 5, 0) - 1.0) <= 1e-9


def test_seesaw_chsh_reaches_oracle():
    oracle = chsh_angle_sweep()
    best = max(seesaw_value(chsh_game(), 2, 50, s) for s in range(5))
    assert best >= oracle - 1e-4
    assert best <= oracle + 1e-9        # no dimension-2 strategy beats the bound


@settings(max_examples=15)
@given(small_games(), st.integers(0, 1000), st.integers(1, 3))
def test_seesaw_monotone(g, seed, dim):
    h = seesaw(g, dim, 8, seed).history
    assert all(b >= a - 1e-12 for a, b in zip(h, h[1:]))


def test_seesaw_deterministic():
    a = seesaw(chsh_game(), 2, 10, 4)
    b = seesaw(chsh_game(), 2, 10, 4)
    assert a.history == b.history
