from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from windowgames import fixtures
from windowgames.game import (Owner, ParseError, StochasticGame, ValidationError,
                              class_restriction, format_game, parse_game, parse_rational,
                              restrict)
from windowgames.generate import random_game
from windowgames.strategy import (SKIP, StrategyMachine, format_machine, induce_chain,
                                  parse_machines, run_strategy)


def test_parse_five_classes():
    g = fixtures.five_classes()
    assert len(g) == 14
    assert g.owner[g.index["v1"]] is Owner.MIN
    assert g.owner[g.index["v3"]] is Owner.MAX
    assert g.owner[g.index["v2"]] is Owner.RANDOM
    assert g.prob[g.index["v2"], g.index["v1"]] == Fraction(1, 2)
    assert g.payoff[g.index["v7"], g.index["v9"]] == -6


def test_rationals_are_exact():
    g = parse_game("game t\nvertex a rand\nvertex b max\n"
                   "edge a a payoff -7/3 prob 1/3\nedge a b payoff 0 prob 2/3\n"
                   "edge b a payoff 5\n")
    assert g.payoff[0, 0] == Fraction(-7, 3)
    assert sum(g.prob[0, u] for u in g.succ[0]) == 1
    assert parse_rational("+4/6") == Fraction(2, 3)
    with pytest.raises(ValueError):
        parse_rational("0.5")


@pytest.mark.parametrize("text, line, fragment", [
    ("vertex a max\n", 1, "game"),
    ("game g\nvertex a boss\n", 2, "owner"),
    ("game g\nvertex a max\nedge a a pay 1\n", 3, "edge"),
    ("game g\nvertex a max\nedge a a payoff x\n", 3, "rational"),
    ("game g\nvertex a max\n\nnode a\n", 4, "directive"),
])
def test_syntax_errors_carry_position(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse_game(text)
    assert err.value.line == line
    assert fragment in str(err.value)


@pytest.mark.parametrize("text, vertex, fragment", [
    ("game g\nvertex a max\nvertex b max\nedge a b payoff 0\n", "b", "deadlock"),
    ("game g\nvertex a rand\nedge a a payoff 0 prob 5/6\n", "a", "sums to 5/6"),
    ("game g\nvertex a rand\nvertex b max\nedge a a payoff 0 prob 3/2\n"
     "edge a b payoff 0 prob -1/2\nedge b b payoff 0\n", "a", "nonpositive"),
    ("game g\nvertex a max\nedge a a payoff 0 prob 1\n", "a", "non-random"),
    ("game g\nvertex a rand\nedge a a payoff 0\n", "a", "prob"),
])
def test_validation_names_the_vertex(text, vertex, fragment):
    with pytest.raises(ValidationError) as err:
        parse_game(text)
    assert err.value.vertex == vertex
    assert fragment in str(err.value)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6), st.integers(1, 3))
def test_format_parse_round_trip(seed, n, degree):
    g = random_game(seed, n, max_out=degree)
    again = parse_game(format_game(g))
    assert again == g
    assert format_game(again) == format_game(g)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_restrict_to_everything_is_identity(seed, n):
    g = random_game(seed, n)
    assert restrict(g, range(n)) == g


def test_restrict_examples():
    g = fixtures.five_classes()
    v6 = restrict(g, [g.index["v6"]])
    assert len(v6) == 1 and v6.succ[0] == (0,) and v6.payoff[0, 0] == 0
    with pytest.raises(ValidationError, match="v2"):
        restrict(g, g.indices(["v1", "v2"]))


def test_class_restriction_absorbs_boundary():
    g = fixtures.five_classes()
    sub = class_restriction(g, g.indices(["v2", "v3", "v4", "v5"]))
    for vid in ("v2", "v5"):
        v = sub.index[vid]
        assert sub.succ[v] == (v,)
        assert sub.payoff[v, v] == 0 and sub.prob[v, v] == 1
    v3 = sub.index["v3"]
    assert [sub.ids[u] for u in sub.succ[v3]] == ["v2", "v4", "v5"]
    single = class_restriction(g, [g.index["v1"]])
    assert len(single) == 1 and single.payoff[0, 0] == -2


def test_class_restriction_rejects_deadlock():
    g = fixtures.memory()
    with pytest.raises(ValidationError, match="deadlock"):
        class_restriction(g, [g.index["v1"]])


def test_memoryless_machine_and_skip():
    g = fixtures.memory()
    m = StrategyMachine.memoryless(g, Owner.MAX, {0: 1})
    m.check(g)
    assert m.n_states == 1
    assert run_strategy(m, [0]) == 1
    assert run_strategy(m, [0, 1]) is SKIP


def test_counter_machine_follows_prefix_length():
    # Min at v2 loops twice, then returns to v1
    g = fixtures.memory()
    v1, v2 = 0, 1
    trans = ((1, 1), (2, 2), (0, 0))
    out = ((SKIP, v2), (SKIP, v2), (SKIP, v1))
    m = StrategyMachine(Owner.MIN, 0, trans, out)
    m.check(g)
    moves = [run_strategy(m, [v2] * k) for k in range(1, 7)]
    assert moves == [v2, v2, v1, v2, v2, v1]


def test_machine_round_trip():
    g = fixtures.memory()
    m = StrategyMachine(Owner.MIN, 0, ((1, 1), (0, 0)), ((SKIP, 1), (SKIP, 0)))
    (back,) = parse_machines(format_machine(m, g), g)
    assert back == m


def test_minimized_merges_equivalent_states():
    g = fixtures.memory()
    m = StrategyMachine(Owner.MAX, 0, ((1, 1), (2, 2), (0, 0)),
                        ((1, SKIP), (1, SKIP), (1, SKIP)))
    assert m.minimized().n_states == 1


def test_induced_chain_memory_cycle():
    g = fixtures.memory()
    smax = StrategyMachine.memoryless(g, Owner.MAX, {0: 1})
    smin = StrategyMachine.memoryless(g, Owner.MIN, {1: 0})
    chain = induce_chain(g, smax, smin, 0)
    assert len(chain.states) == 2
    arena = chain.arena
    assert sorted(arena.payoff.values()) == [-1, 1]


def test_induced_chain_absorbing_start():
    g = fixtures.left_right()
    v3 = g.index["v3"]
    smax = StrategyMachine.memoryless(g, Owner.MAX, {v3: v3})
    smin = StrategyMachine.memoryless(g, Owner.MIN)
    chain = induce_chain(g, smax, smin, v3)
    assert len(chain.states) == 1


def test_induced_chain_branches_at_random_vertex():
    g = fixtures.left_right()
    smax = StrategyMachine.memoryless(g, Owner.MAX)
    smin = StrategyMachine.memoryless(g, Owner.MIN, {g.index["v1"]: g.index["v2"]})
    chain = induce_chain(g, smax, smin, g.index["v2"])
    start = chain.arena
    assert sorted(start.prob[0, u] for u in start.succ[0]) == [Fraction(1, 2)] * 2


def test_equality_is_structural():
    a = StochasticGame.from_edges("x", [("a", "max")], [("a", "a", 1)])
    b = StochasticGame.from_edges("x", [("a", Owner.MAX)], [("a", "a", Fraction(1))])
    assert a == b
