"""Random games for testing and the reachability-to-window reduction."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .game import Owner, StochasticGame

PROBS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3))


def random_game(seed: int | random.Random, n_vertices: int, max_out: int = 2,
                payoffs: Sequence[int] = range(-2, 3), probs: Sequence[Fraction] = PROBS,
                owners: Sequence[Owner] = tuple(Owner), name: str | None = None) -> StochasticGame:
    """A random valid game; random vertices with two successors split by ``probs``.

    With more than two successors a random vertex uses the uniform distribution.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    ids = [f"v{i + 1}" for i in range(n_vertices)]
    owner, succ, payoff, prob = [], [], {}, {}
    for v in range(n_vertices):
        o = rng.choice(list(owners))
        out = sorted(rng.sample(range(n_vertices), rng.randint(1, min(max_out, n_vertices))))
        owner.append(o)
        succ.append(out)
        for u in out:
            payoff[v, u] = Fraction(rng.choice(list(payoffs)))
        if o is Owner.RANDOM:
            if len(out) == 1:
                prob[v, out[0]] = Fraction(1)
            elif len(out) == 2:
                p = rng.choice(list(probs))
                prob[v, out[0]], prob[v, out[1]] = p, 1 - p
            else:
                for u in out:
                    prob[v, u] = Fraction(1, len(out))
    label = name or f"random{n_vertices}"
    return StochasticGame(label, ids, owner, succ, payoff, prob)


def ssg_to_fwmp(game: StochasticGame, targets: Iterable[int]) -> StochasticGame:
    """Window game whose FWMP values equal the reachability values of ``targets``.

    Targets become absorbing with a payoff-1 self-loop, every other payoff is 0.
    Vertex ids and indices are preserved.
    """
    targets = set(targets)
    owner, succ, payoff, prob = [], [], {}, {}
    for v in range(len(game)):
        if v in targets:
            owner.append(Owner.RANDOM)
            succ.append([v])
            payoff[v, v] = Fraction(1)
            prob[v, v] = Fraction(1)
            continue
        owner.append(game.owner[v])
        succ.append(list(game.succ[v]))
        for u in game.succ[v]:
            payoff[v, u] = Fraction(0)
            if game.owner[v] is Owner.RANDOM:
                prob[v, u] = game.prob[v, u]
    return StochasticGame(f"{game.name}-fwmp", game.ids, owner, succ, payoff, prob)
