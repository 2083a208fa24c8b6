"""Expected window mean-payoff values: bounds, candidates, exact evaluation.

The pipeline is guess and check. A candidate vector comes from strategy
improvement with exact evaluation, its entries are rounded to the nearest
fraction allowed by the denominator bound, and only vectors accepted by the
verifier are reported. When the heuristic candidate is rejected an exhaustive
search takes over.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .game import GameError, Owner, StochasticGame, boundary_vertices, fix_choices, fmt
from .linalg import SingularMatrix, determinant, solve_dense
from .mdp import (bwmp_for_min, chain_values, complete_choice, fwmp_bscc, liminf_for_max,
                  liminf_for_min, positional_choices, solve_mdp)
from .objective import Objective
from .strategy import InducedChain, StrategyMachine, format_machine
from .verifier import VerificationReport, verify
from .window import best_window, build_history_product, candidate_values

BRUTE_FORCE_CAP = 200
STRATEGY_LIMIT = 1_000_000


class SolveError(GameError):
    pass


@dataclass(frozen=True)
class DenominatorBounds:
    no_boundary_bound: int
    global_bound: int
    granularity: Fraction
    payoff_bound: int
    max_payoff_denominator: int
    max_prob_denominator: int
    theta_bound: int | None = None


def compute_bounds(game: StochasticGame, objective: Objective) -> DenominatorBounds:
    """Worst-case denominators of expected values.

    ``theta_bound`` (FWMP only) is the largest denominator among candidate
    class values, a much smaller bound that only covers classes without
    boundary vertices.
    """
    n = len(game)
    q_w = max((p.denominator for p in game.payoff.values()), default=1)
    q = max((p.denominator for p in game.prob.values()), default=1)
    if objective.is_fwmp:
        nb = q_w ** objective.window * objective.window
        theta = max(x.denominator for x in candidate_values(game, None, objective.window))
    else:
        nb = q_w ** n * n
        theta = None
    big = 2 ** n * q ** (n ** 3) * nb ** n
    return DenominatorBounds(nb, big, Fraction(1, big) ** 2, game.payoff_bound(), q_w, q, theta)


@dataclass(frozen=True)
class BoundaryLinearSystem:
    """Boundary-class values from one Bellman row per class.

    Row i reads x_i = sum_j Q_B[i][j] x_j + sum_c Q_C[i][c] rhs_values[c],
    written at the representative of boundary class i.
    """

    boundary_classes: tuple[int, ...]
    fixed_classes: tuple[int, ...]
    representative: tuple[int, ...]
    q_b: tuple[tuple[Fraction, ...], ...]
    q_c: tuple[tuple[Fraction, ...], ...]
    rhs_values: tuple[Fraction, ...]
    solution: tuple[Fraction, ...]
    alpha: int
    determinant: int

    @property
    def size(self) -> int:
        return len(self.boundary_classes)


def solve_boundary_system(game: StochasticGame, classes: Sequence[frozenset[int]],
                          known: dict[int, Fraction]) -> BoundaryLinearSystem:
    """Solve for the values of classes that have boundary vertices.

    ``classes`` is a partition of the vertices, ``known`` maps the index of
    every class without boundary to its value.
    """
    class_of = {v: i for i, members in enumerate(classes) for v in members}
    if len(class_of) != len(game):
        raise ValueError("classes must partition the vertices")
    bnd, reps = [], []
    for i, members in enumerate(classes):
        b = boundary_vertices(game, members)
        if b:
            bnd.append(i)
            reps.append(b[0])
    fixed = [i for i in range(len(classes)) if i not in bnd]
    missing = [i for i in fixed if i not in known]
    if missing:
        raise ValueError(f"no value supplied for classes {missing}")
    pos_b = {c: k for k, c in enumerate(bnd)}
    pos_c = {c: k for k, c in enumerate(fixed)}
    m = len(bnd)
    qb = [[Fraction(0)] * m for _ in range(m)]
    qc = [[Fraction(0)] * len(fixed) for _ in range(m)]
    for r, v in enumerate(reps):
        for u in game.succ[v]:
            c = class_of[u]
            if c in pos_b:
                qb[r][pos_b[c]] += game.prob[v, u]
            else:
                qc[r][pos_c[c]] += game.prob[v, u]
    rhs_vals = [Fraction(known[c]) for c in fixed]
    alpha = math.lcm(1, *(x.denominator for row in qb for x in row))
    eye_minus = [[(1 if i == j else 0) - qb[i][j] for j in range(m)] for i in range(m)]
    det = determinant([[alpha * x for x in row] for row in eye_minus])
    if det == 0:
        raise SingularMatrix("I - Q_B is singular: the partition is not a value partition")
    assert det.denominator == 1
    rhs = [sum((qc[r][k] * rhs_vals[k] for k in range(len(fixed))), Fraction(0))
           for r in range(m)]
    sol = solve_dense(eye_minus, rhs) if m else []
    return BoundaryLinearSystem(tuple(bnd), tuple(fixed), tuple(reps),
                                tuple(map(tuple, qb)), tuple(map(tuple, qc)), tuple(rhs_vals),
                                tuple(sol), alpha, int(det))


def _bscc_value(objective: Objective | None):
    if objective is None:
        return liminf_for_min
    if objective.is_fwmp:
        return fwmp_bscc(objective.window)
    return bwmp_for_min


def exact_chain_value(chain: InducedChain, objective: Objective | None) -> Fraction:
    """Expected value at the start state of an induced chain (None means liminf)."""
    return chain_values(chain.arena, _bscc_value(objective))[0]


def _arena(game: StochasticGame, objective: Objective, cap: int | None):
    """Analysed arena and the arena vertex of each game vertex."""
    if objective.is_fwmp:
        prod = build_history_product(game, objective.window)
        if cap is not None and len(prod.game) > cap:
            raise SolveError(f"history product has {len(prod.game)} states, cap is {cap}")
        return prod.game, [prod.initial[v] for v in range(len(game))], prod
    return game, list(range(len(game))), None


def _min_response(arena: StochasticGame, choice: dict[int, int], objective: Objective):
    mdp = fix_choices(arena, choice)
    mec = liminf_for_min if objective.is_fwmp else bwmp_for_min
    return solve_mdp(mdp, Owner.MIN, mec, maximize=False)


def brute_force_expected_values(game: StochasticGame, objective: Objective,
                                cap: int = BRUTE_FORCE_CAP,
                                limit: int = STRATEGY_LIMIT) -> tuple[Fraction, ...]:
    """Max over Max's positional arena strategies of Min's exact best response."""
    arena, entry, _ = _arena(game, objective, cap)
    out = []
    for v in range(len(game)):
        best = None
        for choice in positional_choices(arena, Owner.MAX, entry[v], limit):
            full = complete_choice(arena, Owner.MAX, choice)
            val = _min_response(arena, full, objective)[entry[v]]
            if best is None or val > best:
                best = val
        out.append(best)
    return tuple(out)


def dual_expected_values(game: StochasticGame, window_length: int,
                         limit: int = STRATEGY_LIMIT) -> tuple[Fraction, ...]:
    """FWMP values as min over Min's positional product strategies of Max's optimum."""
    prod = build_history_product(game, window_length)
    arena = prod.game
    out = []
    for v in range(len(game)):
        x = prod.initial[v]
        best = None
        for choice in positional_choices(arena, Owner.MIN, x, limit):
            mdp = fix_choices(arena, complete_choice(arena, Owner.MIN, choice))
            val = solve_mdp(mdp, Owner.MAX, liminf_for_max, maximize=True)[x]
            if best is None or val < best:
                best = val
        out.append(best)
    return tuple(out)


def _improves(new, old, sign: int) -> bool:
    return (all(sign * (a - b) >= 0 for a, b in zip(new, old))
            and any(a != b for a, b in zip(new, old)))


def _max_response(arena: StochasticGame, choice: dict[int, int], objective: Objective):
    return solve_mdp(fix_choices(arena, choice), Owner.MAX, liminf_for_max, maximize=True)


def strategy_improvement(game: StochasticGame, objective: Objective, max_rounds: int = 200,
                         player: Owner = Owner.MAX):
    """Positional strategy improvement on the analysed arena against exact responses.

    ``player`` picks the improving side; Min is only supported for FWMP, whose
    product objective is a liminf and so symmetric. Returns the arena values
    and the final positional arena strategy. Convergence to the optimum is not
    guaranteed, hence the verifier gate.
    """
    arena, entry, prod = _arena(game, objective, None)
    if player is Owner.MAX:
        sign, respond = 1, _min_response
    elif objective.is_fwmp:
        sign, respond = -1, _max_response
    else:
        raise ValueError("Min-side improvement needs a window objective")
    sigma = complete_choice(arena, player, {})
    val = respond(arena, sigma, objective)
    for _ in range(max_rounds):
        greedy = dict(sigma)
        for x, y in sigma.items():
            top = max(arena.succ[x], key=lambda u: (sign * val[u], u == y))
            if sign * (val[top] - val[y]) > 0:
                greedy[x] = top
        if greedy != sigma:
            new = respond(arena, greedy, objective)
            if _improves(new, val, sign):
                sigma, val = greedy, new
                continue
        moved = False
        for x, y in sorted(sigma.items()):
            for u in arena.succ[x]:
                if u == y or sign * (val[u] - val[y]) < 0:
                    continue
                trial = dict(sigma)
                trial[x] = u
                new = respond(arena, trial, objective)
                if _improves(new, val, sign):
                    sigma, val, moved = trial, new, True
                    break
            if moved:
                break
        if not moved:
            break
    return [val[entry[v]] for v in range(len(game))], sigma


def estimate_and_round(game: StochasticGame, objective: Objective,
                       bounds: DenominatorBounds | None = None,
                       player: Owner = Owner.MAX) -> tuple[Fraction, ...]:
    bounds = bounds or compute_bounds(game, objective)
    values, _ = strategy_improvement(game, objective, player=player)
    return tuple(Fraction(x).limit_denominator(bounds.global_bound) for x in values)


@dataclass(frozen=True)
class SolveReport:
    game: StochasticGame
    objective: Objective
    vector: tuple[Fraction, ...]
    method: str
    verification: VerificationReport
    provenance: tuple[tuple[Fraction, str], ...]
    linear_system: BoundaryLinearSystem | None = None
    rejected: tuple[tuple[str, tuple[Fraction, ...], tuple[str, int | None] | None], ...] = ()

    @property
    def strategies(self) -> tuple[StrategyMachine | None, StrategyMachine | None]:
        return self.verification.synthesized or (None, None)

    def value(self, vid: str) -> Fraction:
        return self.vector[self.game.index[vid]]


def _linear_system(game: StochasticGame, report: VerificationReport):
    dec = report.decomposition
    members = [m for _, m in dec.classes]
    known = {i: val for i, (val, _) in enumerate(dec.classes) if not dec.boundary[i]}
    system = solve_boundary_system(game, members, known)
    for c, x in zip(system.boundary_classes, system.solution):
        if dec.classes[c][0] != x:
            raise AssertionError("boundary system disagrees with the accepted vector")
    return system


def solve(game: StochasticGame, objective: Objective, fallback_cap: int = 2000) -> SolveReport:
    bounds = compute_bounds(game, objective)
    rejected = []
    candidate = estimate_and_round(game, objective, bounds)
    report = verify(game, candidate, objective, bounds.global_bound)
    method = "estimate+round"
    if not report.accepted and objective.is_fwmp:
        # the other side often escapes where Max's improvement stalls
        rejected.append((method, candidate, report.failure()))
        candidate = estimate_and_round(game, objective, bounds, Owner.MIN)
        report = verify(game, candidate, objective, bounds.global_bound)
        method = "estimate+round(min)"
    if not report.accepted:
        rejected.append((method, candidate, report.failure()))
        if objective.is_fwmp:
            if len(build_history_product(game, objective.window).game) > fallback_cap:
                raise SolveError("heuristic candidate rejected and the game is too large "
                                 "for exhaustive search")
            candidate = dual_expected_values(game, objective.window)
        else:
            candidate = brute_force_expected_values(game, objective, cap=None)
        method = "enumerate"
        report = verify(game, candidate, objective, bounds.global_bound)
        if not report.accepted:
            rejected.append((method, candidate, report.failure()))
            raise SolveError("no candidate verified: " + "; ".join(
                f"{m} failed {f}" for m, _, f in rejected))
    dec = report.decomposition
    prov = tuple((val, "linsys" if dec.boundary[i] else "theta")
                 for i, (val, _) in enumerate(dec.classes))
    return SolveReport(game, objective, report.vector, method, report, prov,
                       _linear_system(game, report), tuple(rejected))


def format_solve_report(report: SolveReport) -> str:
    game = report.game
    width = max(len(v) for v in game.ids)
    lines = [f"# {game.name}: {report.objective} values ({report.method}, "
             f"{report.verification.verdict})"]
    for v, x in enumerate(report.vector):
        lines.append(f"#   {game.ids[v]:<{width}}  {fmt(x)}")
    for v, x in enumerate(report.vector):
        lines.append(f"value {game.ids[v]} {fmt(x)}")
    for i, (val, how) in enumerate(report.provenance):
        lines.append(f"provenance {i} {how}  # class value {fmt(val)}")
    for m in report.strategies:
        if m is not None:
            lines.append(format_machine(m, game).rstrip("\n"))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: Fraction
    radius: float
    episodes: int
    horizon: int
    samples: tuple[Fraction, ...] = field(repr=False, default=())


def _sampled_value(pays: list[Fraction], objective: Objective, span: int) -> Fraction:
    """Worst window over the sampled suffix."""
    length = objective.window if objective.is_fwmp else span
    last = len(pays) - length
    return min(best_window(pays[i:i + length], length) for i in range(last + 1))


def monte_carlo_value(game: StochasticGame, profile: tuple[StrategyMachine, StrategyMachine],
                      start: int, objective: Objective, episodes: int = 1000,
                      horizon: int | None = None, seed: int = 0,
                      confidence: float = 0.999) -> MonteCarloEstimate:
    """Sample plays of a strategy profile and estimate the expected window value.

    Each episode draws from its own child seed, so estimates do not depend on
    how episodes are scheduled. The radius is a Hoeffding bound at the given
    confidence for values in [-K, K].
    """
    n = len(game)
    span = objective.window if objective.is_fwmp else 4 * n
    horizon = horizon or 50 * n * span
    warm = 10 * n
    if horizon < warm + span:
        raise ValueError(f"horizon must be at least {warm + span}")
    smax, smin = profile
    # one common denominator makes every draw an exact integer comparison
    den = math.lcm(1, *(p.denominator for p in game.prob.values()))
    cum = {v: np.cumsum([int(game.prob[v, u] * den) for u in game.succ[v]])
           for v in game.vertices_of(Owner.RANDOM)}
    samples = []
    for child in np.random.SeedSequence(seed).spawn(episodes):
        rng = np.random.default_rng(child)
        draws = rng.integers(0, den, size=horizon)
        v, a, b = start, smax.initial, smin.initial
        pays = []
        for t in range(horizon):
            owner = game.owner[v]
            if owner is Owner.MAX:
                u = smax.output[a][v]
            elif owner is Owner.MIN:
                u = smin.output[b][v]
            else:
                u = game.succ[v][int(np.searchsorted(cum[v], draws[t], side="right"))]
            a, b = smax.transition[a][v], smin.transition[b][v]
            pays.append(game.payoff[v, u])
            v = u
        samples.append(_sampled_value(pays[warm:], objective, span))
    mean = sum(samples, Fraction(0)) / episodes
    k = game.payoff_bound()
    radius = 2 * k * math.sqrt(math.log(2 / (1 - confidence)) / (2 * episodes))
    return MonteCarloEstimate(mean, radius, episodes, horizon, tuple(samples))
