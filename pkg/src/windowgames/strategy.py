"""Mealy-machine strategies and the Markov chains they induce."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .game import GameError, Owner, StochasticGame

SKIP = None  # output of a machine at vertices it does not own


@dataclass(frozen=True)
class StrategyMachine:
    """A deterministic finite-memory strategy.

    ``transition[q][v]`` is the state after reading vertex ``v`` in state ``q``;
    ``output[q][v]`` is the chosen successor, or ``SKIP`` when ``v`` belongs to
    someone else.
    """

    player: Owner
    initial: int
    transition: tuple[tuple[int, ...], ...]
    output: tuple[tuple[int | None, ...], ...]

    @property
    def n_states(self) -> int:
        return len(self.transition)

    @classmethod
    def memoryless(cls, game: StochasticGame, player: Owner,
                   choice: dict[int, int] | None = None) -> "StrategyMachine":
        """One-state machine; unlisted vertices default to their first successor."""
        choice = choice or {}
        out = tuple(choice.get(v, game.succ[v][0]) if game.owner[v] is player else SKIP
                    for v in range(len(game)))
        return cls(player, 0, ((0,) * len(game),), (out,))

    def check(self, game: StochasticGame) -> None:
        n = len(game)
        for q in range(self.n_states):
            if len(self.transition[q]) != n or len(self.output[q]) != n:
                raise GameError(f"machine state {q} is not total over {n} vertices")
            for v in range(n):
                out = self.output[q][v]
                if game.owner[v] is self.player:
                    if out not in game.succ[v]:
                        raise GameError(
                            f"state {q} outputs a non-successor at {game.ids[v]}")
                elif out is not SKIP:
                    raise GameError(f"state {q} moves at foreign vertex {game.ids[v]}")
                if not 0 <= self.transition[q][v] < self.n_states:
                    raise GameError(f"state {q} jumps to an unknown state")

    def step(self, q: int, v: int) -> tuple[int | None, int]:
        return self.output[q][v], self.transition[q][v]

    def minimized(self) -> "StrategyMachine":
        """Equivalent machine with the fewest states (reachable part, merged)."""
        seen = {self.initial: 0}
        order = [self.initial]
        for q in order:
            for r in self.transition[q]:
                if r not in seen:
                    seen[r] = len(order)
                    order.append(r)
        block = {q: self.output[q] for q in order}
        names: dict = {}
        part = {q: names.setdefault(block[q], len(names)) for q in order}
        while True:
            names = {}
            refined = {q: names.setdefault(
                (part[q], tuple(part[r] for r in self.transition[q])), len(names)) for q in order}
            if len(names) == len(set(part.values())):
                break
            part = refined
        # renumber blocks by first appearance so the initial state is 0
        rank: dict[int, int] = {}
        for q in order:
            rank.setdefault(part[q], len(rank))
        rep = {}
        for q in order:
            rep.setdefault(rank[part[q]], q)
        trans = tuple(tuple(rank[part[r]] for r in self.transition[rep[b]])
                      for b in range(len(rank)))
        outs = tuple(self.output[rep[b]] for b in range(len(rank)))
        return StrategyMachine(self.player, 0, trans, outs)


def run_strategy(machine: StrategyMachine, prefix: Sequence[int],
                 game: StochasticGame | None = None) -> int | None:
    """The move of ``machine`` after the nonempty play prefix ``prefix``."""
    if not prefix:
        raise ValueError("empty prefix")
    if game is not None and not game.is_path(prefix):
        raise GameError("prefix is not a path of the game")
    q = machine.initial
    for v in prefix[:-1]:
        q = machine.transition[q][v]
    return machine.output[q][prefix[-1]]


def format_machine(machine: StrategyMachine, game: StochasticGame) -> str:
    lines = [f"strategy {machine.player.value} states {machine.n_states} init {machine.initial}"]
    for q in range(machine.n_states):
        for v, vid in enumerate(game.ids):
            out = machine.output[q][v]
            shown = "-" if out is SKIP else game.ids[out]
            lines.append(f"t {q} {vid} -> {machine.transition[q][v]} out {shown}")
    return "\n".join(lines) + "\n"


def parse_machines(text: str, game: StochasticGame) -> list[StrategyMachine]:
    """Read every ``strategy`` block in ``text``; other lines are ignored."""
    machines = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        if words[0] == "strategy":
            if len(words) != 6 or words[2] != "states" or words[4] != "init":
                raise GameError(f"line {lineno}: malformed strategy header")
            n = int(words[3])
            current = (Owner.parse(words[1]), int(words[5]),
                       [[0] * len(game) for _ in range(n)], [[SKIP] * len(game) for _ in range(n)])
            machines.append(current)
        elif words[0] == "t" and current is not None:
            if len(words) != 7 or words[3] != "->" or words[5] != "out":
                raise GameError(f"line {lineno}: malformed transition")
            q, v, r = int(words[1]), game.index[words[2]], int(words[4])
            current[2][q][v] = r
            current[3][q][v] = SKIP if words[6] == "-" else game.index[words[6]]
        else:
            current = None
    result = []
    for player, init, trans, outs in machines:
        m = StrategyMachine(player, init, tuple(map(tuple, trans)), tuple(map(tuple, outs)))
        m.check(game)
        result.append(m)
    return result


@dataclass(frozen=True)
class InducedChain:
    """Markov chain over (vertex, Max state, Min state) reachable from a start.

    ``arena`` is the same chain as a game in which every state is a random
    vertex, so graph and linear-algebra routines apply unchanged. State 0 is
    the start.
    """

    game: StochasticGame
    profile: tuple[StrategyMachine, StrategyMachine]
    states: tuple[tuple[int, int, int], ...]
    arena: StochasticGame


def induce_chain(game: StochasticGame, sigma_max: StrategyMachine,
                 sigma_min: StrategyMachine, start: int) -> InducedChain:
    init = (start, sigma_max.initial, sigma_min.initial)
    index = {init: 0}
    states = [init]
    succ, payoff, prob = [], {}, {}
    for s in states:
        v, a, b = s
        a2, b2 = sigma_max.transition[a][v], sigma_min.transition[b][v]
        if game.owner[v] is Owner.MAX:
            moves = [(sigma_max.output[a][v], Fraction(1))]
        elif game.owner[v] is Owner.MIN:
            moves = [(sigma_min.output[b][v], Fraction(1))]
        else:
            moves = [(u, game.prob[v, u]) for u in game.succ[v]]
        i = index[s]
        out = []
        for u, p in moves:
            t = (u, a2, b2)
            if t not in index:
                index[t] = len(states)
                states.append(t)
            j = index[t]
            out.append(j)
            payoff[i, j] = game.payoff[v, u]
            prob[i, j] = p
        succ.append(out)
    ids = [f"{game.ids[v]}@{a}.{b}" for v, a, b in states]
    arena = StochasticGame(f"{game.name}-chain", ids, [Owner.RANDOM] * len(states),
                           succ, payoff, prob)
    return InducedChain(game, (sigma_max, sigma_min), tuple(states), arena)


def positional_chain(game: StochasticGame, choice: dict[int, int],
                     start: int | None = None) -> StochasticGame:
    """Chain arena of a positional profile, as random vertices over ``game``'s indices.

    When ``start`` is given only the reachable part matters to callers, but
    the arena keeps all vertices for index stability.
    """
    succ, payoff, prob = [], {}, {}
    for v in range(len(game)):
        if game.owner[v] is Owner.RANDOM:
            out = list(game.succ[v])
            for u in out:
                prob[v, u] = game.prob[v, u]
        else:
            out = [choice[v]]
            prob[v, choice[v]] = Fraction(1)
        succ.append(out)
        for u in out:
            payoff[v, u] = game.payoff[v, u]
    return StochasticGame(game.name, game.ids, [Owner.RANDOM] * len(game), succ, payoff, prob,
                          validate=False)


def split_profile(machines: Iterable[StrategyMachine]):
    """Pick the Max and Min machine out of a collection (missing ones are None)."""
    by_player = {m.player: m for m in machines}
    return by_player.get(Owner.MAX), by_player.get(Owner.MIN)
