"""Turn-based stochastic games with exact rational payoffs and probabilities.

Vertices carry string ids in files and dense integer indices everywhere else.
Successor lists are kept sorted by index so that every algorithm built on top
of them iterates in a reproducible order.
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction
from typing import Iterable, Sequence


class Owner(enum.Enum):
    MAX = "max"
    MIN = "min"
    RANDOM = "rand"

    @property
    def opponent(self) -> "Owner":
        if self is Owner.MAX:
            return Owner.MIN
        if self is Owner.MIN:
            return Owner.MAX
        raise ValueError("random vertices have no opponent")

    @classmethod
    def parse(cls, word: str) -> "Owner":
        for owner in cls:
            if owner.value == word.lower():
                return owner
        raise ValueError(f"unknown owner {word!r}")


class GameError(ValueError):
    """Base class for malformed input."""


class ParseError(GameError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ValidationError(GameError):
    def __init__(self, message: str, vertex: str | None = None):
        super().__init__(message)
        self.vertex = vertex


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    if not _RATIONAL.match(text):
        raise ValueError(f"not a rational: {text!r}")
    return Fraction(text)


def fmt(q: Fraction | int) -> str:
    """Render a rational as ``p/q`` in lowest terms, integers without a slash."""
    return str(Fraction(q))


class StochasticGame:
    """An immutable stochastic game.

    ``payoff`` maps every edge ``(u, v)`` to a Fraction and ``prob`` maps
    every edge out of a random vertex to its probability.
    """

    __slots__ = ("name", "ids", "index", "owner", "succ", "payoff", "prob", "pred")

    def __init__(self, name, ids, owner, succ, payoff, prob, validate=True):
        self.name = name
        self.ids = tuple(ids)
        self.index = {vid: i for i, vid in enumerate(self.ids)}
        self.owner = tuple(owner)
        self.succ = tuple(tuple(sorted(s)) for s in succ)
        self.payoff = dict(payoff)
        self.prob = dict(prob)
        pred = [[] for _ in self.ids]
        for u, vs in enumerate(self.succ):
            for v in vs:
                pred[v].append(u)
        self.pred = tuple(tuple(p) for p in pred)
        if validate:
            self.validate()

    @classmethod
    def from_edges(cls, name: str, vertices: Iterable[tuple[str, Owner]],
                   edges: Iterable[tuple]) -> "StochasticGame":
        """Build a game from ``(id, owner)`` pairs and ``(src, dst, payoff[, prob])`` tuples."""
        ids, owner = [], []
        for vid, own in vertices:
            if vid in ids:
                raise ValidationError(f"duplicate vertex {vid}", vid)
            ids.append(vid)
            owner.append(own if isinstance(own, Owner) else Owner.parse(own))
        index = {vid: i for i, vid in enumerate(ids)}
        succ = [set() for _ in ids]
        payoff, prob = {}, {}
        for edge in edges:
            src, dst, pay = edge[0], edge[1], edge[2]
            p = edge[3] if len(edge) > 3 else None
            for vid in (src, dst):
                if vid not in index:
                    raise ValidationError(f"edge mentions unknown vertex {vid}", vid)
            u, v = index[src], index[dst]
            if v in succ[u]:
                raise ValidationError(f"duplicate edge {src} -> {dst}", src)
            succ[u].add(v)
            payoff[u, v] = Fraction(pay)
            if p is not None:
                if owner[u] is not Owner.RANDOM:
                    raise ValidationError(
                        f"probability on edge out of non-random vertex {src}", src)
                prob[u, v] = Fraction(p)
        return cls(name, ids, owner, succ, payoff, prob)

    def validate(self) -> None:
        for v, vid in enumerate(self.ids):
            if not self.succ[v]:
                raise ValidationError(f"deadlock: vertex {vid} has no successor", vid)
            if self.owner[v] is Owner.RANDOM:
                total = Fraction(0)
                for u in self.succ[v]:
                    p = self.prob.get((v, u))
                    if p is None:
                        raise ValidationError(
                            f"random vertex {vid} has no probability on edge to {self.ids[u]}", vid)
                    if p <= 0:
                        raise ValidationError(
                            f"nonpositive probability {fmt(p)} at random vertex {vid}", vid)
                    total += p
                if total != 1:
                    raise ValidationError(
                        f"distribution at {vid} sums to {fmt(total)}", vid)
        for (u, _v) in self.prob:
            if self.owner[u] is not Owner.RANDOM:
                raise ValidationError(
                    f"probability on edge out of non-random vertex {self.ids[u]}", self.ids[u])

    def __len__(self) -> int:
        return len(self.ids)

    def __repr__(self) -> str:
        return f"<StochasticGame {self.name!r}: {len(self)} vertices, {self.edge_count()} edges>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, StochasticGame):
            return NotImplemented
        return (self.name == other.name and self.ids == other.ids and self.owner == other.owner
                and self.succ == other.succ and self.payoff == other.payoff
                and self.prob == other.prob)

    def __hash__(self):
        return hash((self.name, self.ids, self.succ))

    def edge_count(self) -> int:
        return sum(len(s) for s in self.succ)

    def edges(self):
        for u, vs in enumerate(self.succ):
            for v in vs:
                yield u, v

    def vertices_of(self, owner: Owner) -> list[int]:
        return [v for v in range(len(self)) if self.owner[v] is owner]

    def vid(self, v: int) -> str:
        return self.ids[v]

    def indices(self, ids: Iterable[str]) -> list[int]:
        return [self.index[i] for i in ids]

    def names(self, vertices: Iterable[int]) -> list[str]:
        return [self.ids[v] for v in sorted(vertices)]

    def payoff_bound(self) -> int:
        """Smallest integer K with every |payoff| <= K."""
        top = max((abs(p) for p in self.payoff.values()), default=Fraction(0))
        return -((-top.numerator) // top.denominator)

    def is_path(self, seq: Sequence[int]) -> bool:
        return all(b in self.succ[a] for a, b in zip(seq, seq[1:]))


def parse_game(text: str) -> StochasticGame:
    """Parse the line-oriented game format. Errors carry a line and column."""
    name = None
    vertices: list[tuple[str, Owner]] = []
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        words = line.split()
        if not words:
            continue
        col = len(line) - len(line.lstrip()) + 1
        head = words[0]
        if name is None:
            if head != "game" or len(words) != 2:
                raise ParseError("expected 'game <name>' as the first line", lineno, col)
            name = words[1]
            continue
        if head == "vertex":
            if len(words) != 3:
                raise ParseError("expected 'vertex <id> <max|min|rand>'", lineno, col)
            try:
                owner = Owner.parse(words[2])
            except ValueError:
                raise ParseError(f"unknown owner {words[2]!r}", lineno,
                                 line.index(words[2]) + 1) from None
            vertices.append((words[1], owner))
        elif head == "edge":
            if len(words) not in (5, 7) or words[3] != "payoff" or (
                    len(words) == 7 and words[5] != "prob"):
                raise ParseError(
                    "expected 'edge <src> <dst> payoff <rational> [prob <rational>]'", lineno, col)
            try:
                pay = parse_rational(words[4])
                p = parse_rational(words[6]) if len(words) == 7 else None
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), lineno, col) from None
            edges.append((words[1], words[2], pay, p))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)
    if name is None:
        raise ParseError("empty input", 1)
    game = StochasticGame.from_edges(name, vertices, edges)
    for v in game.vertices_of(Owner.RANDOM):
        for u in game.succ[v]:
            if (v, u) not in game.prob:
                raise ValidationError(
                    f"edge {game.ids[v]} -> {game.ids[u]} out of random vertex needs a prob",
                    game.ids[v])
    return game


def format_game(game: StochasticGame) -> str:
    lines = [f"game {game.name}"]
    for v, vid in enumerate(game.ids):
        lines.append(f"vertex {vid} {game.owner[v].value}")
    for u, v in game.edges():
        line = f"edge {game.ids[u]} {game.ids[v]} payoff {fmt(game.payoff[u, v])}"
        if game.owner[u] is Owner.RANDOM:
            line += f" prob {fmt(game.prob[u, v])}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def restrict(game: StochasticGame, kept: Iterable[int], name: str | None = None) -> StochasticGame:
    """The subgame induced by ``kept``. Vertex ids are preserved."""
    kept = sorted(set(kept))
    keep = set(kept)
    for v in kept:
        inside = [u for u in game.succ[v] if u in keep]
        if not inside:
            raise ValidationError(f"kept vertex {game.ids[v]} has no kept successor", game.ids[v])
        if game.owner[v] is Owner.RANDOM and len(inside) != len(game.succ[v]):
            dropped = next(u for u in game.succ[v] if u not in keep)
            raise ValidationError(
                f"random vertex {game.ids[v]} lost successor {game.ids[dropped]}", game.ids[v])
    return _induced(game, kept, name, boundary=())


def class_restriction(game: StochasticGame, members: Iterable[int]) -> StochasticGame:
    """Restrict to a value class, turning boundary vertices into absorbing ones.

    A boundary vertex is a random vertex with a successor outside the class;
    it keeps only a self-loop of payoff 0.
    """
    members = sorted(set(members))
    if not members:
        raise ValueError("empty class")
    keep = set(members)
    boundary = [v for v in members
                if game.owner[v] is Owner.RANDOM and any(u not in keep for u in game.succ[v])]
    for v in members:
        if v in boundary:
            continue
        if not any(u in keep for u in game.succ[v]):
            raise ValidationError(
                f"deadlock: {game.ids[v]} has no successor inside its class", game.ids[v])
    return _induced(game, members, None, boundary=boundary)


def boundary_vertices(game: StochasticGame, members: Iterable[int]) -> list[int]:
    keep = set(members)
    return [v for v in sorted(keep)
            if game.owner[v] is Owner.RANDOM and any(u not in keep for u in game.succ[v])]


def _induced(game, kept, name, boundary):
    local = {v: i for i, v in enumerate(kept)}
    bnd = set(boundary)
    succ, payoff, prob = [], {}, {}
    for v in kept:
        i = local[v]
        if v in bnd:
            succ.append([i])
            payoff[i, i] = Fraction(0)
            if game.owner[v] is Owner.RANDOM:
                prob[i, i] = Fraction(1)
            continue
        out = [u for u in game.succ[v] if u in local]
        succ.append([local[u] for u in out])
        for u in out:
            payoff[i, local[u]] = game.payoff[v, u]
            if game.owner[v] is Owner.RANDOM:
                prob[i, local[u]] = game.prob[v, u]
    return StochasticGame(name or game.name, [game.ids[v] for v in kept],
                          [game.owner[v] for v in kept], succ, payoff, prob)


def embedding(sub: StochasticGame, parent: StochasticGame) -> list[int]:
    """Map indices of ``sub`` to indices of ``parent`` through shared ids."""
    return [parent.index[vid] for vid in sub.ids]


def fix_choices(game: StochasticGame, choice: dict[int, int]) -> StochasticGame:
    """Keep only the chosen edge at every vertex listed in ``choice``."""
    succ = [[choice[v]] if v in choice else list(game.succ[v]) for v in range(len(game))]
    payoff = {(u, v): game.payoff[u, v] for u in range(len(game)) for v in succ[u]}
    return StochasticGame(game.name, game.ids, game.owner, succ, payoff, game.prob,
                          validate=False)
