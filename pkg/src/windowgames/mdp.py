"""Exact optimal values of one-player stochastic arenas.

Fixing one player's positional strategy leaves a Markov decision process.
Every play of an MDP ends up inside an end component, so for prefix-independent
objectives the optimum is: value each maximal end component, collapse it to a
node that may stop with that value or leave through a controlled edge, and run
policy iteration on the quotient. The quotient has no end components left, so
every policy stops with probability 1 and policy iteration is exact.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable

from .game import Owner, StochasticGame
from .graphs import mec_decompose, min_mean_cycle, sccs
from .linalg import solve_fixed_point
from .window import best_window


def _internal_payoffs(game: StochasticGame, region: frozenset[int]) -> set[Fraction]:
    return {game.payoff[u, w] for u in region for w in game.succ[u] if w in region}


def liminf_for_min(game: StochasticGame, region: frozenset[int]) -> Fraction:
    """Minimiser inside an end component visits every edge: the smallest payoff."""
    return min(_internal_payoffs(game, region))


def _has_end_component(game: StochasticGame, region: set[int],
                       ok: Callable[[int, int], bool]) -> bool:
    work = [set(region)]
    while work:
        reg = work.pop()
        changed = True
        while changed:
            changed = False
            for v in sorted(reg):
                out = [u in reg and ok(v, u) for u in game.succ[v]]
                if (all(out) if game.owner[v] is Owner.RANDOM else any(out)):
                    continue
                reg.discard(v)
                changed = True
        if not reg:
            continue
        edges = {v: [u for u in game.succ[v] if u in reg and ok(v, u)] for v in reg}
        comps = sccs(game, reg, edges)
        if len(comps) == 1:
            return True
        work.extend(set(c) for c in comps)
    return False


def liminf_for_max(game: StochasticGame, region: frozenset[int]) -> Fraction:
    """Maximiser settles in the sub-component whose worst payoff is largest."""
    for c in sorted(_internal_payoffs(game, region), reverse=True):
        if _has_end_component(game, set(region), lambda u, w, c=c: game.payoff[u, w] >= c):
            return c
    raise AssertionError("an end component always admits its own minimum")


def bwmp_for_min(game: StochasticGame, region: frozenset[int]) -> Fraction:
    """Minimiser inside an end component: the smallest simple-cycle mean."""
    return min_mean_cycle(game, region)[0]


def fwmp_bscc(window_length: int):
    """Value of a bottom SCC of a chain for FWMP: every finite path recurs."""

    def value(game: StochasticGame, region: frozenset[int]) -> Fraction:
        best = None
        for s in sorted(region):
            stack = [(s, [])]
            while stack:
                v, pays = stack.pop()
                if len(pays) == window_length:
                    w = best_window(pays, window_length)
                    if best is None or w < best:
                        best = w
                    continue
                for u in game.succ[v]:
                    stack.append((u, pays + [game.payoff[v, u]]))
        return best

    return value


def solve_mdp(game: StochasticGame, controller: Owner | None,
              mec_value: Callable[[StochasticGame, frozenset[int]], Fraction],
              maximize: bool) -> list[Fraction]:
    """Optimal expected value at every vertex when only ``controller`` chooses.

    Vertices of the other non-random owner must have a single successor;
    with ``controller=None`` the game is a Markov chain.
    """
    n = len(game)
    dec = mec_decompose(game)
    k = len(dec.mecs)
    node = [dec.membership[v] if dec.membership[v] is not None else None for v in range(n)]
    singles = [v for v in range(n) if node[v] is None]
    for i, v in enumerate(singles):
        node[v] = k + i
    total = k + len(singles)
    stop = [mec_value(game, m) for m in dec.mecs]

    def dist_of(v: int, u: int | None = None) -> dict[int, Fraction]:
        if u is not None:
            return {node[u]: Fraction(1)}
        d: dict[int, Fraction] = {}
        for w in game.succ[v]:
            d[node[w]] = d.get(node[w], Fraction(0)) + game.prob[v, w]
        return d

    actions: list[list[dict[int, Fraction]]] = [[] for _ in range(total)]
    for i, m in enumerate(dec.mecs):
        for v in sorted(m):
            if game.owner[v] is controller:
                for u in game.succ[v]:
                    if u not in m:
                        actions[i].append(dist_of(v, u))
    for v in singles:
        x = node[v]
        if game.owner[v] is Owner.RANDOM:
            actions[x].append(dist_of(v))
        elif game.owner[v] is controller:
            actions[x].extend(dist_of(v, u) for u in game.succ[v])
        else:
            if len(game.succ[v]) != 1:
                raise ValueError(f"vertex {game.ids[v]} of the passive player must be fixed")
            actions[x].append(dist_of(v, game.succ[v][0]))
    # policy: -1 means stop (MEC nodes only), otherwise an action index
    policy = [-1] * k + [0] * len(singles)
    better = (lambda a, b: a > b) if maximize else (lambda a, b: a < b)
    while True:
        rows = {}
        for x in range(total):
            if policy[x] < 0:
                rows[x] = ({}, stop[x])
            else:
                rows[x] = (dict(actions[x][policy[x]]), Fraction(0))
        val = solve_fixed_point(rows)
        changed = False
        for x in range(total):
            cur = val[x]
            best, choice = cur, policy[x]
            if x < k and policy[x] >= 0 and better(stop[x], best):
                best, choice = stop[x], -1
            for a, d in enumerate(actions[x]):
                q = sum((p * val[y] for y, p in d.items()), Fraction(0))
                if better(q, best):
                    best, choice = q, a
            if choice != policy[x]:
                policy[x] = choice
                changed = True
        if not changed:
            return [val[node[v]] for v in range(n)]


def chain_values(arena: StochasticGame,
                 bscc_value: Callable[[StochasticGame, frozenset[int]], Fraction]) -> list[Fraction]:
    """Expected value of every state of a Markov chain given per-BSCC values."""
    return solve_mdp(arena, None, bscc_value, maximize=False)


def positional_choices(game: StochasticGame, player: Owner, start: int | Iterable[int],
                       limit: int | None = None):
    """Yield the player's positional strategies, restricted to what ``start`` can reach.

    Decisions are only made at vertices that remain reachable under the
    decisions already taken, so strategies differing only on unreachable
    vertices are produced once.
    """
    starts = [start] if isinstance(start, int) else list(start)
    count = 0

    def reach(choice):
        seen = set(starts)
        stack = list(starts)
        pending = []
        while stack:
            v = stack.pop()
            if game.owner[v] is player and len(game.succ[v]) > 1:
                if v not in choice:
                    pending.append(v)
                    continue
                nxt = [choice[v]]
            else:
                nxt = game.succ[v]
            for u in nxt:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return pending

    def rec(choice):
        nonlocal count
        pending = reach(choice)
        if not pending:
            count += 1
            if limit is not None and count > limit:
                raise OverflowError(f"more than {limit} strategies")
            yield dict(choice)
            return
        v = min(pending)
        for u in game.succ[v]:
            choice[v] = u
            yield from rec(choice)
            del choice[v]

    yield from rec({})


def all_positional(game: StochasticGame, player: Owner, limit: int | None = None):
    """Every positional strategy of ``player`` on the whole game."""
    owned = [v for v in game.vertices_of(player)]
    total = 1
    for v in owned:
        total *= len(game.succ[v])
    if limit is not None and total > limit:
        raise OverflowError(f"{total} strategies exceed the limit {limit}")
    for pick in iproduct(*(game.succ[v] for v in owned)):
        yield dict(zip(owned, pick))


def complete_choice(game: StochasticGame, player: Owner, choice: dict[int, int]) -> dict[int, int]:
    """Fill unlisted vertices of ``player`` with their first successor."""
    full = {v: game.succ[v][0] for v in game.vertices_of(player)}
    full.update(choice)
    return full
