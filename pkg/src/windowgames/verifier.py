"""Certificate checking for expected window mean-payoff values.

A candidate vector is accepted when three things hold:

* it satisfies the Bellman equations (max, min, average by owner);
* inside each value class, Max wins {value > class value - g} almost surely
  on the part of the class where Min can keep the play away from the class
  boundary (Max's trap);
* dually Min wins {value < class value + g} almost surely on its own trap.

For a denominator bound D and g = 1/D**2 at most one vector with denominators
at most D passes, and it is the value vector. Accepted vectors come with
optimal strategies assembled from the per-class pieces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .game import (GameError, Owner, ParseError, StochasticGame, ValidationError,
                   boundary_vertices, class_restriction, embedding, fmt, parse_rational, restrict)
from .graphs import positive_attractor
from .objective import Objective
from .qualitative import (QualitativeResult, almost_sure_bwmp, almost_sure_fwmp,
                          history_machine)
from .strategy import StrategyMachine


class DenominatorOverflow(GameError):
    pass


class DecompositionError(GameError):
    pass


@dataclass(frozen=True)
class ValueClassDecomposition:
    """Value classes of a vector together with their boundary and trap structure.

    ``split[i][player]`` is ``(A, T)``: the player's positive attractor to the
    boundary of class i and the remaining trap, in original vertex indices.
    """

    game: StochasticGame
    vector: tuple[Fraction, ...]
    classes: tuple[tuple[Fraction, frozenset[int]], ...]
    class_of: tuple[int, ...]
    boundary: tuple[frozenset[int], ...]
    restriction: tuple[StochasticGame, ...]
    split: tuple[dict, ...]
    witness: tuple[dict, ...]


def decompose(game: StochasticGame, vector: Sequence[Fraction]) -> ValueClassDecomposition:
    vector = tuple(Fraction(x) for x in vector)
    if len(vector) != len(game):
        raise ValueError("vector length differs from the number of vertices")
    values = sorted(set(vector))
    classes = tuple((val, frozenset(v for v in range(len(game)) if vector[v] == val))
                    for val in values)
    class_of = [0] * len(game)
    for i, (_, members) in enumerate(classes):
        for v in members:
            class_of[v] = i
    boundary, restriction, split, witness = [], [], [], []
    for _, members in classes:
        bnd = frozenset(boundary_vertices(game, members))
        try:
            sub = class_restriction(game, members)
        except ValidationError as exc:
            raise DecompositionError(str(exc)) from None
        emb = embedding(sub, game)
        local_bnd = [sub.index[game.ids[v]] for v in sorted(bnd)]
        parts, wit = {}, {}
        for player in (Owner.MAX, Owner.MIN):
            res = positive_attractor(sub, player, local_bnd)
            parts[player] = (frozenset(emb[v] for v in res.attractor),
                             frozenset(emb[v] for v in res.complement_trap))
            wit[player] = {emb[v]: emb[u] for v, u in res.witness.items()}
        boundary.append(bnd)
        restriction.append(sub)
        split.append(parts)
        witness.append(wit)
    if check_bellman(game, vector).passed:
        # a consistent vector averages at boundary vertices, so they straddle their class
        for v in set().union(*boundary):
            around = {vector[u] for u in game.succ[v]}
            assert min(around) < vector[v] < max(around), game.ids[v]
    return ValueClassDecomposition(game, vector, classes, tuple(class_of), tuple(boundary),
                                   tuple(restriction), tuple(split), tuple(witness))


@dataclass(frozen=True)
class BellmanCheck:
    passed: bool
    vertex: int | None = None
    expected: Fraction | None = None
    actual: Fraction | None = None


def bellman_value(game: StochasticGame, vector: Sequence[Fraction], v: int) -> Fraction:
    succ = game.succ[v]
    if game.owner[v] is Owner.MAX:
        return max(vector[u] for u in succ)
    if game.owner[v] is Owner.MIN:
        return min(vector[u] for u in succ)
    return sum((game.prob[v, u] * vector[u] for u in succ), Fraction(0))


def check_bellman(game: StochasticGame, vector: Sequence[Fraction]) -> BellmanCheck:
    for v in range(len(game)):
        expected = bellman_value(game, vector, v)
        if expected != vector[v]:
            return BellmanCheck(False, v, expected, Fraction(vector[v]))
    return BellmanCheck(True)


@dataclass(frozen=True)
class ClassCheck:
    index: int
    value: Fraction
    trap: frozenset[int]
    passed: bool
    losing: int | None = None
    result: QualitativeResult | None = field(default=None, compare=False, repr=False)
    trap_game: StochasticGame | None = field(default=None, compare=False, repr=False)


def trap_game(dec: ValueClassDecomposition, i: int, player: Owner) -> StochasticGame | None:
    trap = dec.split[i][player][1]
    if not trap:
        return None
    sub = dec.restriction[i]
    return restrict(sub, [sub.index[dec.game.ids[v]] for v in trap])


def check_condition(game: StochasticGame, dec: ValueClassDecomposition, player: Owner,
                    objective: Objective, granularity: Fraction) -> list[ClassCheck]:
    """Per-class almost-sure check on the player's trap (vacuous when empty)."""
    checks = []
    for i, (value, _) in enumerate(dec.classes):
        trap = dec.split[i][player][1]
        tg = trap_game(dec, i, player)
        if tg is None:
            checks.append(ClassCheck(i, value, trap, True))
            continue
        tau = value - granularity if player is Owner.MAX else value + granularity
        if objective.is_fwmp:
            res = almost_sure_fwmp(tg, player, objective.window, tau, strict=True)
        else:
            res = almost_sure_bwmp(tg, player, tau, strict=True)
        lost = sorted(set(range(len(tg))) - res.winning)
        losing = game.index[tg.ids[lost[0]]] if lost else None
        checks.append(ClassCheck(i, value, trap, not lost, losing, res, tg))
    return checks


@dataclass(frozen=True)
class VerificationReport:
    objective: Objective
    vector: tuple[Fraction, ...]
    denominator_bound: int
    bellman: BellmanCheck
    lower_bound: tuple[ClassCheck, ...] | None
    upper_bound: tuple[ClassCheck, ...] | None
    decomposition: ValueClassDecomposition | None = field(default=None, repr=False)
    synthesized: tuple[StrategyMachine | None, StrategyMachine | None] | None = field(
        default=None, repr=False)
    structural: str | None = None

    @property
    def accepted(self) -> bool:
        return (self.bellman.passed and self.lower_bound is not None
                and self.upper_bound is not None
                and all(c.passed for c in self.lower_bound)
                and all(c.passed for c in self.upper_bound))

    @property
    def verdict(self) -> str:
        return "accepted" if self.accepted else "rejected"

    def failure(self) -> tuple[str, int | None] | None:
        """First failing condition and a witness vertex."""
        if not self.bellman.passed:
            return "bellman", self.bellman.vertex
        if self.structural:
            return "structure", None
        for name, checks in (("lower-bound", self.lower_bound), ("upper-bound", self.upper_bound)):
            for c in checks or ():
                if not c.passed:
                    return name, c.losing
        return None


def verify(game: StochasticGame, vector: Sequence[Fraction], objective: Objective,
           denominator_bound: int | None = None, synthesize: bool = True) -> VerificationReport:
    vector = tuple(Fraction(x) for x in vector)
    if denominator_bound is None:
        from .solver import compute_bounds
        denominator_bound = compute_bounds(game, objective).global_bound
    for v, x in enumerate(vector):
        if x.denominator > denominator_bound:
            raise DenominatorOverflow(
                f"value of {game.ids[v]} has denominator {x.denominator} > {denominator_bound}")
    g = Fraction(1, denominator_bound) ** 2
    bell = check_bellman(game, vector)
    if not bell.passed:
        return VerificationReport(objective, vector, denominator_bound, bell, None, None)
    try:
        dec = decompose(game, vector)
    except DecompositionError as exc:
        return VerificationReport(objective, vector, denominator_bound, bell, None, None,
                                  structural=str(exc))
    lower = tuple(check_condition(game, dec, Owner.MAX, objective, g))
    upper = tuple(check_condition(game, dec, Owner.MIN, objective, g))
    report = VerificationReport(objective, vector, denominator_bound, bell, lower, upper, dec)
    if synthesize and report.accepted:
        pair = synthesize_optimal(game, dec, objective, lower, upper)
        report = VerificationReport(objective, vector, denominator_bound, bell, lower, upper,
                                    dec, pair)
    return report


def synthesize_optimal(game: StochasticGame, dec: ValueClassDecomposition, objective: Objective,
                       lower: Sequence[ClassCheck] | None = None,
                       upper: Sequence[ClassCheck] | None = None):
    """Compose per-class trap strategies with attractor moves toward the boundary.

    Returns ``(max_machine, min_machine)``. For BWMP the Min side may need
    infinite memory and is returned as None.
    """
    if lower is None or upper is None:
        bound = max(x.denominator for x in dec.vector)
        g = Fraction(1, bound + 1) ** 2
        lower = check_condition(game, dec, Owner.MAX, objective, g)
        upper = check_condition(game, dec, Owner.MIN, objective, g)
    if not all(c.passed for c in (*lower, *upper)):
        raise ValueError("strategies are only synthesised for verified vectors")
    machines = []
    for player, checks in ((Owner.MAX, lower), (Owner.MIN, upper)):
        if not objective.is_fwmp and player is Owner.MIN:
            machines.append(None)
            continue
        memory = objective.window if objective.is_fwmp else 0
        machines.append(history_machine(game, memory, player,
                                        _composed_decider(game, dec, player, checks, objective)))
    return tuple(machines)


def _composed_decider(game, dec, player, checks, objective):
    deciders = {}
    for c in checks:
        if c.result is None:
            continue
        tg = c.trap_game
        emb = embedding(tg, game)
        if objective.is_fwmp:
            prod = c.result.product
            width = prod.window_length + 1
            deciders[c.index] = (tg, emb, prod, c.result.choice, width)
        else:
            deciders[c.index] = (tg, emb, None, c.result.choice, 1)

    def decide(path: tuple[int, ...]) -> int:
        v = path[-1]
        i = dec.class_of[v]
        trap = dec.split[i][player][1]
        if v not in trap:
            return dec.witness[i][player].get(v, game.succ[v][0])
        tg, emb, prod, choice, width = deciders[i]
        if prod is None:
            return emb[choice[tg.index[game.ids[v]]]]
        tail = []
        for u in reversed(path):
            if u not in trap:
                break
            tail.append(tg.index[game.ids[u]])
        tail.reverse()
        lab = tuple(tail[-width:])
        lab = (lab[0],) * (width - len(lab)) + lab
        x = prod.index[lab]
        return emb[prod.labels[choice[x]][-1]]

    return decide


def parse_certificate(text: str, game: StochasticGame) -> tuple[Fraction, ...]:
    """Read ``value <vertex> <rational>`` lines; anything else is ignored."""
    found: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if not words or words[0] != "value":
            continue
        if len(words) != 3:
            raise ParseError("expected: value <vertex> <rational>", lineno)
        if words[1] not in game.index:
            raise ParseError(f"unknown vertex {words[1]}", lineno, raw.index(words[1]) + 1)
        v = game.index[words[1]]
        if v in found:
            raise ParseError(f"second value for {words[1]}", lineno)
        try:
            found[v] = parse_rational(words[2])
        except ValueError:
            raise ParseError(f"bad rational {words[2]!r}", lineno, raw.index(words[2]) + 1) from None
    missing = [game.ids[v] for v in range(len(game)) if v not in found]
    if missing:
        raise GameError(f"no value for {', '.join(missing)}")
    return tuple(found[v] for v in range(len(game)))


def format_certificate(game: StochasticGame, vector: Sequence[Fraction]) -> str:
    return "".join(f"value {vid} {fmt(x)}\n" for vid, x in zip(game.ids, vector))


def format_report(report: VerificationReport, game: StochasticGame) -> str:
    lines = [f"verdict {report.verdict}",
             f"objective {report.objective}",
             f"denominator-bound has {len(str(report.denominator_bound))} digits"]
    b = report.bellman
    if b.passed:
        lines.append("bellman pass")
    else:
        lines.append(f"bellman fail at {game.ids[b.vertex]}: "
                     f"expected {fmt(b.expected)}, got {fmt(b.actual)}")
    if report.structural:
        lines.append(f"structure fail: {report.structural}")
    for name, checks in (("lower-bound", report.lower_bound), ("upper-bound", report.upper_bound)):
        for c in checks or ():
            trap = ",".join(game.names(sorted(c.trap))) or "-"
            status = "pass" if c.passed else f"fail at {game.ids[c.losing]}"
            lines.append(f"{name} class {c.index} value {fmt(c.value)} trap {trap} {status}")
    return "\n".join(lines) + "\n"
