from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from windowgames import fixtures
from windowgames.game import Owner, StochasticGame
from windowgames.generate import random_game
from windowgames.window import (Lasso, best_window, build_history_product, bwmp_value_lasso,
                                candidate_values, fwmp1_cobuchi_target, fwmp_value_lasso,
                                infix_mean, parse_lasso, window_closes)

F = Fraction
PROPERTY_CASES = 1000


def loop_game(payoffs):
    """A single cycle v1 -> v2 -> ... -> v1 carrying ``payoffs``."""
    n = len(payoffs)
    verts = [(f"v{i + 1}", "max") for i in range(n)]
    edges = [(f"v{i + 1}", f"v{(i + 1) % n + 1}", p) for i, p in enumerate(payoffs)]
    return StochasticGame.from_edges("loop", verts, edges)


@st.composite
def lassos(draw, max_vertices=5):
    """A random game and a lasso in it, built by walking until a vertex repeats."""
    game = random_game(draw(st.integers(0, 10**6)), draw(st.integers(1, max_vertices)),
                       max_out=draw(st.integers(1, 3)), payoffs=range(-4, 5))
    walk = [draw(st.integers(0, len(game) - 1))]
    while True:
        nxt = draw(st.sampled_from(game.succ[walk[-1]]))
        if nxt in walk:
            i = walk.index(nxt)
            return game, Lasso(tuple(walk[:i]), tuple(walk[i:]))
        walk.append(nxt)


payoff_lists = st.lists(st.integers(-5, 5).map(F), min_size=1, max_size=12)


def test_infix_mean_examples():
    assert infix_mean([F(-1), F(1)]) == 0
    assert infix_mean([F(2), F(7)]) == F(9, 2)
    assert infix_mean([F(-3, 4)]) == F(-3, 4)
    with pytest.raises(ValueError):
        infix_mean([])


def test_window_closes_examples():
    assert window_closes([F(-1), F(1)], F(0), 2) == 2
    assert window_closes([F(-1), F(1)], F(0), 1) is None
    assert window_closes([F(3), F(-8), F(5)], F(-8), 3) == 1


def test_best_window():
    assert best_window([F(-1), F(1)], 2) == 0
    assert best_window([F(-1), F(1)], 1) == -1
    assert best_window([F(0), F(2), F(-9)], 3) == 1


def test_fwmp_lasso_examples():
    g = fixtures.memory()
    cyc = parse_lasso("v1,v2", g)
    # the alternating play -1, +1 closes every window by its second step
    assert fwmp_value_lasso(cyc, g, 2) == 0
    assert fwmp_value_lasso(cyc, g, 1) == -1
    assert fwmp_value_lasso(parse_lasso("v1;v2", g), g, 3) == 0
    lr = fixtures.left_right()
    assert fwmp_value_lasso(parse_lasso("v2;v3", lr), lr, 1) == 1
    for ell in (1, 2, 5):
        assert fwmp_value_lasso(parse_lasso("v1", lr), lr, ell) == -1


def test_bwmp_lasso_examples():
    g = fixtures.memory()
    assert bwmp_value_lasso(parse_lasso("v1,v2", g), g) == 0
    assert bwmp_value_lasso(parse_lasso("v2", g), g) == 0
    fc = fixtures.five_classes()
    assert bwmp_value_lasso(parse_lasso("v10,v11", fc), fc) == 1
    assert bwmp_value_lasso(parse_lasso("v14", fc), fc) == 2


def test_lasso_must_follow_edges():
    g = fixtures.memory()
    with pytest.raises(Exception, match="not an edge"):
        parse_lasso("v1", g)
    with pytest.raises(Exception, match="unknown vertex"):
        parse_lasso("v9", g)


def test_candidate_values_examples():
    fc = fixtures.five_classes()
    assert candidate_values(fc, [fc.index["v1"]], 2) == [-2]
    assert candidate_values(loop_game([F(0), F(2)]), None, 2) == [0, 1, 2]
    star = StochasticGame.from_edges(
        "star", [("a", "min"), ("b", "max"), ("c", "max")],
        [("a", "a", -3), ("a", "b", -6), ("a", "c", 0), ("b", "b", 1), ("c", "c", 5)])
    assert candidate_values(star, None, 1) == [-6, -3, 0, 1, 5]


def test_history_product_window_one_tracks_edges():
    g = fixtures.left_right()
    prod = build_history_product(g, 1, g.index["v1"])
    labels = set(prod.labels)
    padded = (g.index["v1"],) * 2
    assert padded in labels
    assert labels - {padded} <= set(g.edges())
    for x, lab in enumerate(prod.labels):
        if g.is_path(lab):
            assert prod.vertex_payoff(x) == g.payoff[lab]
        assert prod.game.owner[x] is g.owner[lab[-1]]


def test_history_product_of_self_loop():
    g = loop_game([F(5, 2)])
    for ell in (1, 2, 4):
        prod = build_history_product(g, ell, 0)
        assert prod.labels == ((0,) * (ell + 1),)
        assert prod.game.succ[0] == (0,) and prod.vertex_payoff(0) == F(5, 2)


def _product_liminf(game, lasso, ell):
    """Follow the lasso through the history product; min payoff on its cycle."""
    prod = build_history_product(game, ell, lasso.stem[0] if lasso.stem else lasso.cycle[0])
    steps = len(lasso.stem) + ell + 1 + len(lasso.cycle)
    play = lasso.vertices(steps + 1)
    x = prod.initial[play[0]]
    seen = []
    for v in play[1:]:
        x = next(y for y in prod.game.succ[x] if prod.labels[y][-1] == v)
        seen.append(x)
    return min(prod.vertex_payoff(y) for y in seen[-len(lasso.cycle):])


def test_product_matches_lassos_of_the_alternating_game():
    g = fixtures.memory()
    walks = [[0]]
    found = 0
    for _ in range(6):
        walks = [w + [u] for w in walks for u in g.succ[w[-1]]]
        for w in walks:
            if w[-1] in w[:-1]:
                continue
            for i in range(len(w)):
                if w[i] in g.succ[w[-1]]:
                    lasso = Lasso(tuple(w[:i]), tuple(w[i:]))
                    unrolled = Lasso(lasso.stem + lasso.cycle * 3, lasso.cycle)
                    assert _product_liminf(g, unrolled, 2) == fwmp_value_lasso(lasso, g, 2)
                    found += 1
    assert found == 2


def test_cobuchi_target_examples():
    g = loop_game([F(0), F(2)])
    assert fwmp1_cobuchi_target(g, F(0)) == set()
    mixed = StochasticGame.from_edges("m", [("a", "max"), ("b", "max")],
                                      [("a", "b", 1), ("a", "a", -3), ("b", "a", 0)])
    assert 0 not in fwmp1_cobuchi_target(mixed, F(0))
    fc = fixtures.five_classes()
    v7 = fc.index["v7"]
    assert v7 not in fwmp1_cobuchi_target(fc, F(0))
    owner = list(fc.owner)
    owner[v7] = Owner.MIN
    flipped = StochasticGame("flip", fc.ids, owner, fc.succ, fc.payoff, fc.prob)
    assert v7 in fwmp1_cobuchi_target(flipped, F(0))


# Property suites. Each runs PROPERTY_CASES random cases.

@settings(max_examples=PROPERTY_CASES, deadline=None)
@given(payoff_lists, st.integers(-5, 5).map(F))
def test_window_inductive_property(seq, threshold):
    j = window_closes(seq, threshold, len(seq))
    if j is None:
        return
    for k in range(j):
        closes = window_closes(seq[k:], threshold, j - k)
        assert closes is not None and closes <= j - k


@settings(max_examples=PROPERTY_CASES, deadline=None)
@given(lassos(), st.integers(1, 6))
def test_fwmp_lasso_monotone_in_window(case, ell):
    game, lasso = case
    assert fwmp_value_lasso(lasso, game, ell) <= fwmp_value_lasso(lasso, game, ell + 1)


@settings(max_examples=PROPERTY_CASES, deadline=None)
@given(lassos(), st.integers(1, 8))
def test_bwmp_lasso_sandwich(case, ell):
    game, lasso = case
    cyc = lasso.cycle_payoffs(game)
    bw = bwmp_value_lasso(lasso, game)
    assert infix_mean(cyc) <= bw <= max(cyc)
    assert fwmp_value_lasso(lasso, game, ell) <= bw
    # windows as long as one period already realise the bounded value
    p = len(cyc)
    assert all(fwmp_value_lasso(lasso, game, m) == bw for m in (p, 2 * p, 3 * p + 1))


@settings(max_examples=PROPERTY_CASES, deadline=None)
@given(lassos(), st.integers(1, 3))
def test_product_lasso_correspondence(case, ell):
    game, lasso = case
    reps = -(-ell // len(lasso.cycle)) + 1
    unrolled = Lasso(lasso.stem + lasso.cycle * reps, lasso.cycle)
    assert _product_liminf(game, unrolled, ell) == fwmp_value_lasso(lasso, game, ell)


@settings(max_examples=PROPERTY_CASES, deadline=None)
@given(lassos(), st.integers(1, 5))
def test_lasso_values_are_bounded(case, ell):
    game, lasso = case
    k = game.payoff_bound()
    assert -k <= fwmp_value_lasso(lasso, game, ell) <= k
    assert -k <= bwmp_value_lasso(lasso, game) <= k
