"""Window mean-payoff semantics on finite objects.

A lambda-window opened at position i closes at the first j with
mean(payoffs[i:j]) >= lambda. FWMP(l, lambda) asks that eventually every
window closes within l steps; BWMP asks that this holds for some l.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .game import GameError, Owner, StochasticGame


def infix_mean(payoffs: Sequence[Fraction]) -> Fraction:
    if not payoffs:
        raise ValueError("mean of an empty infix")
    return Fraction(sum(payoffs)) / len(payoffs)


def window_closes(payoffs: Sequence[Fraction], threshold: Fraction, max_len: int) -> int | None:
    """Smallest k <= max_len whose prefix mean reaches ``threshold``, else None."""
    total = Fraction(0)
    for k, p in enumerate(payoffs[:max_len], start=1):
        total += p
        if total >= threshold * k:
            return k
    return None


def best_window(payoffs: Sequence[Fraction], max_len: int) -> Fraction:
    """Largest threshold whose window from position 0 closes within ``max_len``."""
    total = Fraction(0)
    best = None
    for k, p in enumerate(payoffs[:max_len], start=1):
        total += p
        mean = total / k
        if best is None or mean > best:
            best = mean
    return best


@dataclass(frozen=True)
class Lasso:
    """The play ``stem + cycle + cycle + ...`` given by vertex indices."""

    stem: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("a lasso needs a nonempty cycle")

    def check(self, game: StochasticGame) -> None:
        seq = list(self.stem) + list(self.cycle) + [self.cycle[0]]
        for a, b in zip(seq, seq[1:]):
            if b not in game.succ[a]:
                raise GameError(f"{game.ids[a]} -> {game.ids[b]} is not an edge")

    def cycle_payoffs(self, game: StochasticGame) -> list[Fraction]:
        c = self.cycle
        return [game.payoff[c[i], c[(i + 1) % len(c)]] for i in range(len(c))]

    def vertices(self, length: int) -> list[int]:
        """The first ``length`` vertices of the play."""
        out = list(self.stem[:length])
        i = 0
        while len(out) < length:
            out.append(self.cycle[i % len(self.cycle)])
            i += 1
        return out


def parse_lasso(text: str, game: StochasticGame) -> Lasso:
    """``"a,b;c,d"`` is stem a,b then cycle c,d; without ``;`` it is all cycle."""
    stem_text, _, cycle_text = text.rpartition(";")

    def ids(part):
        return tuple(game.index[w.strip()] for w in part.split(",") if w.strip())

    try:
        lasso = Lasso(ids(stem_text), ids(cycle_text))
    except KeyError as exc:
        raise GameError(f"unknown vertex {exc.args[0]}") from None
    lasso.check(game)
    return lasso


def _rotations(cyc: list[Fraction], span: int):
    p = len(cyc)
    for i in range(p):
        yield [cyc[(i + j) % p] for j in range(span)]


def fwmp_value_lasso(lasso: Lasso, game: StochasticGame, window_length: int) -> Fraction:
    lasso.check(game)
    cyc = lasso.cycle_payoffs(game)
    return min(best_window(seg, window_length)
               for seg in _rotations(cyc, window_length))


def bwmp_value_lasso(lasso: Lasso, game: StochasticGame) -> Fraction:
    lasso.check(game)
    cyc = lasso.cycle_payoffs(game)
    mean = infix_mean(cyc)
    span = 2 * len(cyc)
    return min(max(mean, best_window(seg, span)) for seg in _rotations(cyc, span))


def candidate_values(game: StochasticGame, within: Iterable[int] | None,
                     window_length: int) -> list[Fraction]:
    """Means of all multisets of at most ``window_length`` payoffs inside ``within``."""
    dom = set(range(len(game))) if within is None else set(within)
    pays = sorted({game.payoff[u, v] for u, v in game.edges() if u in dom and v in dom})
    vals = set()
    for k in range(1, window_length + 1):
        for combo in combinations_with_replacement(pays, k):
            vals.add(Fraction(sum(combo)) / k)
    return sorted(vals)


def next_value(values: Sequence[Fraction], tau: Fraction) -> Fraction | None:
    """Smallest member of ``values`` strictly above ``tau``."""
    return next((x for x in values if x > tau), None)


def prev_value(values: Sequence[Fraction], tau: Fraction) -> Fraction | None:
    return next((x for x in reversed(values) if x < tau), None)


@dataclass(frozen=True)
class ProductGame:
    """History product: each vertex remembers the last l+1 base vertices.

    ``initial[v]`` is the product index of the padded tuple (v, ..., v).
    Every edge out of a product vertex carries the same payoff, the best
    window value of its label.
    """

    base: StochasticGame
    window_length: int
    game: StochasticGame
    labels: tuple[tuple[int, ...], ...]
    index: dict
    initial: dict[int, int]

    def vertex_payoff(self, x: int) -> Fraction:
        return self.game.payoff[x, self.game.succ[x][0]]


def label_payoff(base: StochasticGame, label: Sequence[int]) -> Fraction:
    if not base.is_path(label):
        return Fraction(0)
    pays = [base.payoff[a, b] for a, b in zip(label, label[1:])]
    return best_window(pays, len(pays))


def build_history_product(game: StochasticGame, window_length: int,
                          start: int | Iterable[int] | None = None) -> ProductGame:
    """Reachable part of the history product from the padded start tuples.

    ``start`` may be one vertex, several, or None for every vertex.
    """
    if window_length < 1:
        raise ValueError("window length must be positive")
    if start is None:
        starts = list(range(len(game)))
    elif isinstance(start, int):
        starts = [start]
    else:
        starts = sorted(set(start))
    width = window_length + 1
    index: dict[tuple[int, ...], int] = {}
    labels: list[tuple[int, ...]] = []
    for v in starts:
        lab = (v,) * width
        if lab not in index:
            index[lab] = len(labels)
            labels.append(lab)
    succ, payoff, prob = [], {}, {}
    for lab in labels:
        x = index[lab]
        last = lab[-1]
        pay = label_payoff(game, lab)
        out = []
        for u in game.succ[last]:
            nxt = lab[1:] + (u,)
            if nxt not in index:
                index[nxt] = len(labels)
                labels.append(nxt)
            y = index[nxt]
            out.append(y)
            payoff[x, y] = pay
            if game.owner[last] is Owner.RANDOM:
                prob[x, y] = game.prob[last, u]
        succ.append(out)
    ids = ["|".join(game.ids[v] for v in lab) for lab in labels]
    owner = [game.owner[lab[-1]] for lab in labels]
    prod = StochasticGame(f"{game.name}-h{window_length}", ids, owner, succ, payoff, prob,
                          validate=False)
    initial = {v: index[(v,) * width] for v in starts}
    return ProductGame(game, window_length, prod, tuple(labels), index, initial)


def fwmp1_cobuchi_target(game: StochasticGame, threshold: Fraction) -> set[int]:
    """Vertices whose visits, under sensible play, force a sub-threshold edge.

    Max vertices qualify when every out-edge is below the threshold, Min and
    random vertices when at least one is. Visiting the set infinitely often
    is then equivalent to losing FWMP(1, threshold).
    """
    bad = set()
    for v in range(len(game)):
        low = [game.payoff[v, u] < threshold for u in game.succ[v]]
        if game.owner[v] is Owner.MAX:
            if all(low):
                bad.add(v)
        elif any(low):
            bad.add(v)
    return bad
