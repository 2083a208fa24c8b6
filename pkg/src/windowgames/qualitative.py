"""Almost-sure winning regions for reachability, Buchi, coBuchi and window objectives."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .game import Owner, StochasticGame, fix_choices
from .graphs import mec_decompose, min_mean_cycle, positive_attractor, reachable
from .mdp import all_positional
from .strategy import StrategyMachine
from .window import (ProductGame, build_history_product, candidate_values, next_value,
                     prev_value)


@dataclass(frozen=True)
class QualitativeResult:
    """Winning region plus a strategy for the winning player.

    ``choice`` is the positional strategy on ``game`` (the analysed arena);
    for window objectives ``game`` is the history product and ``strategy`` is
    the corresponding machine on the original game.
    """

    winning: frozenset[int]
    strategy: StrategyMachine | None
    choice: dict[int, int]
    game: StochasticGame
    mode: str = "almost-sure"
    product: ProductGame | None = field(default=None, compare=False)


def _almost_sure(game: StochasticGame, player: Owner,
                 goal: Callable[[set[int]], set[int]], protect: Iterable[int] = ()):
    region = set(range(len(game)))
    protect = set(protect)
    while True:
        tgt = goal(region)
        pos = positive_attractor(game, player, tgt, region)
        lost = region - pos.attractor
        if not lost:
            return region, tgt, pos
        region -= positive_attractor(game, player.opponent, lost, region, avoid=protect).attractor


def _machine(game, player, choice):
    return StrategyMachine.memoryless(game, player, choice)


def _finish(game, player, region, choice):
    full = {v: game.succ[v][0] for v in game.vertices_of(player)}
    full.update(choice)
    return QualitativeResult(frozenset(region), _machine(game, player, full), full, game)


def almost_sure_reach(game: StochasticGame, player: Owner, target: Iterable[int]) -> QualitativeResult:
    target = set(target)
    region, tgt, pos = _almost_sure(game, player, lambda r: target & r, protect=target)
    choice = dict(pos.witness)
    for v in target & region:
        if game.owner[v] is player:
            choice[v] = min((u for u in game.succ[v] if u in region), default=game.succ[v][0])
    return _finish(game, player, region, choice)


def almost_sure_buchi(game: StochasticGame, player: Owner, target_set: Iterable[int]) -> QualitativeResult:
    target = set(target_set)
    region, tgt, pos = _almost_sure(game, player, lambda r: target & r)
    choice = dict(pos.witness)
    for v in tgt:
        if game.owner[v] is player:
            choice[v] = min(u for u in game.succ[v] if u in region)
    return _finish(game, player, region, choice)


def _cobuchi(game: StochasticGame, player: Owner, bad: set[int], region: set[int]):
    """Opponent's positive Buchi region for ``bad`` inside a subgame, plus the
    player's strategy on the rest."""
    opp = player.opponent
    if not region:
        return set(), {}
    core = region - positive_attractor(game, opp, bad & region, region).attractor
    if not core:
        return set(region), {}
    toward = positive_attractor(game, player, core, region)
    rest = region - toward.attractor
    lost, inner = _cobuchi(game, player, bad, rest)
    if not lost:
        choice = dict(inner)
        choice.update(toward.witness)
        for v in core:
            if game.owner[v] is player:
                choice[v] = min(u for u in game.succ[v] if u in core)
        return set(), choice
    gone = positive_attractor(game, opp, lost, region).attractor
    more, choice = _cobuchi(game, player, bad, region - gone)
    return set(gone) | more, choice


def almost_sure_cobuchi(game: StochasticGame, player: Owner, safe_set: Iterable[int]) -> QualitativeResult:
    """Eventually stay in ``safe_set`` forever.

    The opponent wins with positive probability exactly where it can reach,
    with positive probability, a subgame in which it can force unsafe visits
    again and again; that region is peeled off recursively.
    """
    everything = set(range(len(game)))
    lost, choice = _cobuchi(game, player, everything - set(safe_set), everything)
    return _finish(game, player, everything - lost, choice)


def history_machine(game: StochasticGame, memory: int, player: Owner,
                    decide: Callable[[tuple[int, ...]], int]) -> StrategyMachine:
    """Machine remembering the last ``memory`` vertices of the play.

    ``decide`` receives the remembered path extended by the current vertex
    (at most ``memory + 1`` vertices) and returns the chosen successor.
    """
    n = len(game)
    index = {(): 0}
    states: list[tuple[int, ...]] = [()]
    trans, outs = [], []
    for h in states:
        row_t, row_o = [], []
        for v in range(n):
            full = h + (v,) if not h or v in game.succ[h[-1]] else (v,)
            nxt = full[-memory:] if memory else ()
            if nxt not in index:
                index[nxt] = len(states)
                states.append(nxt)
            row_t.append(index[nxt])
            row_o.append(decide(full) if game.owner[v] is player else None)
        trans.append(tuple(row_t))
        outs.append(tuple(row_o))
    return StrategyMachine(player, 0, tuple(trans), tuple(outs)).minimized()


def product_decider(prod: ProductGame, choice: dict[int, int]):
    """Turn a positional product strategy into a decision on base histories."""
    width = prod.window_length + 1
    base = prod.base

    def decide(path: tuple[int, ...]) -> int:
        lab = path[-width:]
        lab = (lab[0],) * (width - len(lab)) + lab
        x = prod.index.get(lab)
        if x is not None and x in choice:
            return prod.labels[choice[x]][-1]
        return base.succ[path[-1]][0]

    return decide


def almost_sure_fwmp(game: StochasticGame, player: Owner, window_length: int,
                     threshold: Fraction, strict: bool = False) -> QualitativeResult:
    """Almost-sure FWMP threshold objective via the history product.

    Max wants value >= threshold (> when strict), Min wants value <= threshold
    (< when strict). Strict thresholds snap to the neighbouring candidate value.
    """
    threshold = Fraction(threshold)
    prod = build_history_product(game, window_length)
    arena = prod.game
    theta = candidate_values(game, None, window_length)
    pay = [prod.vertex_payoff(x) for x in range(len(arena))]
    if player is Owner.MAX:
        cut = next_value(theta, threshold) if strict else threshold
        good = set() if cut is None else {x for x in range(len(arena)) if pay[x] >= cut}
        res = almost_sure_cobuchi(arena, Owner.MAX, good)
    else:
        cut = prev_value(theta, threshold) if strict else threshold
        bad = set() if cut is None else {x for x in range(len(arena)) if pay[x] <= cut}
        res = almost_sure_buchi(arena, Owner.MIN, bad)
    winning = frozenset(v for v, x in prod.initial.items() if x in res.winning)
    machine = history_machine(game, window_length, player, product_decider(prod, res.choice))
    return QualitativeResult(winning, machine, res.choice, arena, product=prod)


BWMP_STRATEGY_LIMIT = 200_000


def exhaustive_bwmp(game: StochasticGame, player: Owner, threshold: Fraction,
                    strict: bool) -> QualitativeResult:
    """Decide almost-sure BWMP by enumerating Max's positional strategies.

    In the MDP left by a Max strategy, Min can settle in any reachable maximal
    end component and realise its smallest cycle mean there, while any play
    confined to an end component is worth at least that component's smallest
    cycle mean.
    """
    threshold = Fraction(threshold)
    n = len(game)

    def bad_for_max(mean):
        return mean <= threshold if strict else mean < threshold

    def good_for_min(mean):
        return mean < threshold if strict else mean <= threshold

    best_win, best_choice = None, None
    min_win = set(range(n))
    union: set[int] = set()
    for choice in all_positional(game, Owner.MAX, BWMP_STRATEGY_LIMIT):
        mdp = fix_choices(game, choice)
        dec = mec_decompose(mdp)
        means = [min_mean_cycle(mdp, m)[0] for m in dec.mecs]
        if player is Owner.MAX:
            bad = set().union(*(m for m, g in zip(dec.mecs, means) if bad_for_max(g)))
            rev = {v: mdp.pred[v] for v in range(n)}
            lose = reachable(mdp, bad, rev)
            win = set(range(n)) - lose
            union |= win
            if best_win is None or len(win) > len(best_win):
                best_win, best_choice = win, choice
        else:
            good = set().union(*(m for m, g in zip(dec.mecs, means) if good_for_min(g)))
            min_win &= almost_sure_reach(mdp, Owner.MIN, good).winning
    if player is Owner.MAX:
        if best_win != union:
            raise AssertionError("no single positional strategy covers the winning region")
        full = dict(best_choice)
        return QualitativeResult(frozenset(union), _machine(game, Owner.MAX, full), full, game)
    return QualitativeResult(frozenset(min_win), None, {}, game)


def almost_sure_bwmp(game: StochasticGame, player: Owner, threshold: Fraction,
                     strict: bool = False, oracle=None) -> QualitativeResult:
    """Max wants BWMP value >= threshold (> if strict); Min wants <= (< if strict)."""
    return (oracle or exhaustive_bwmp)(game, player, threshold, strict)
