import numpy as np
import pytest
from hypothesis import given, strategies as st

from nlgames.errors import DimensionMismatch, EmptySet
from nlgames.game_model import (Game, all_game, chsh_game, copy_game, copy2_game, is_imitation,
                                none_game, parity_game, validate_game, zero_support)


@st.composite
def games(draw, max_count=3):
    counts = [draw(st.integers(1, max_count)) for _ in range(4)]
    bits = draw(st.lists(st.integers(0, 1), min_size=int(np.prod(counts)),
                         max_size=int(np.prod(counts))))
    return Game(*counts, np.array(bits, dtype=np.int8).reshape(counts))


@st.composite
def relabelings(draw, g):
    perm = lambda n: draw(st.permutations(range(n)))
    return [list(perm(n)) for n in g.counts]


def test_validate_copy_ok():
    validate_game(copy_game())


def test_validate_wrong_size():
    g = Game(1, 1, 2, 2, np.zeros((1, 1, 2, 2)))
    object.__setattr__(g, "lam", np.zeros(3, dtype=np.int8))
    with pytest.raises(DimensionMismatch):
        validate_game(g)


def test_validate_zero_count():
    with pytest.raises(EmptySet):
        validate_game(Game(1, 1, 0, 2, np.zeros((1, 1, 0, 2))))


def test_validate_non_binary():
    with pytest.raises(DimensionMismatch):
        validate_game(Game(1, 1, 1, 1, np.full((1, 1, 1, 1), 2)))


def test_copy_is_imitation():
    rep = is_imitation(copy_game())
    assert rep.is_imitation and rep.a_violations == [] and rep.b_violations == []


def test_all_not_imitation_lists_every_triple():
    rep = is_imitation(all_game())
    assert not rep.is_imitation
    assert rep.a_violations == [(0, 0, 1), (1, 0, 1)]
    assert rep.b_violations == [(0, 0, 1), (1, 0, 1)]


def test_chsh_is_imitation():
    assert is_imitation(chsh_game()).is_imitation


def test_corpus_extras():
    assert is_imitation(parity_game()).is_imitation
    assert is_imitation(copy2_game()).is_imitation
    assert is_imitation(none_game()).is_imitation      # single answers: nothing to separate


def test_zero_support_examples():
    assert zero_support(copy_game()) == [(0, 0, 0, 1), (0, 0, 1, 0)]
    assert zero_support(all_game()) == []
    assert zero_support(none_game()) == [(0, 0, 0, 0)]


def test_from_wins_matches_predicate():
    g = Game.from_wins(1, 1, 2, 2, [(0, 0, 0, 0), (0, 0, 1, 1)])
    assert g == copy_game()
    assert g.wins() == [(0, 0, 0, 0), (0, 0, 1, 1)]


def test_game_is_immutable_and_copies_input():
    lam = np.ones((1, 1, 1, 1), dtype=np.int8)
    g = Game(1, 1, 1, 1, lam)
    lam[0, 0, 0, 0] = 0
    assert g.lam[0, 0, 0, 0] == 1
    with pytest.raises(ValueError):
        g.lam[0, 0, 0, 0] = 0


@given(games())
def test_zero_support_length(g):
    assert len(zero_support(g)) == int((g.lam == 0).sum())
    assert zero_support(g) == sorted(zero_support(g))


@given(games())
def test_transpose_swaps_violations(g):
    r, rt = is_imitation(g), is_imitation(g.transposed())
    assert rt.a_violations == r.b_violations
    assert rt.b_violations == r.a_violations
    assert g.transposed().transposed() == g


@given(st.data())
def test_relabeling_invariance(data):
    g = data.draw(games())
    px, py, pa, pb = data.draw(relabelings(g))
    h = g.relabeled(px, py, pa, pb)
    r, rh = is_imitation(g), is_imitation(h)
    assert r.is_imitation == rh.is_imitation
    # violations of h map to violations of g through the permutations
    mapped_a = {(px[x], *sorted((pa[a], pa[c]))) for x, a, c in rh.a_violations}
    mapped_b = {(py[y], *sorted((pb[b], pb[c]))) for y, b, c in rh.b_violations}
    assert mapped_a == set(r.a_violations)
    assert mapped_b == set(r.b_violations)


@given(games())
def test_imitation_iff_no_violations(g):
    r = is_imitation(g)
    assert r.is_imitation == (not r.a_violations and not r.b_violations)
