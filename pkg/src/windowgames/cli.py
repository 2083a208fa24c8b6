"""Command-line front end.

Exit codes: 0 success or accepted, 1 rejected or unsolved, 2 bad input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dot import to_dot
from .game import GameError, Owner, StochasticGame, fmt, format_game, parse_game, parse_rational
from .generate import ssg_to_fwmp
from .objective import Objective
from .qualitative import almost_sure_bwmp, almost_sure_fwmp
from .solver import SolveError, format_solve_report, monte_carlo_value, solve
from .strategy import StrategyMachine, format_machine, parse_machines, split_profile
from .verifier import format_report, parse_certificate, verify
from .window import bwmp_value_lasso, fwmp_value_lasso, parse_lasso

OK, REJECTED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str) -> StochasticGame:
    try:
        return parse_game(_read(path))
    except GameError as exc:
        raise InputError(f"{path}: {exc}") from None


def _objective(args) -> Objective:
    if args.objective == "fwmp":
        if args.window is None:
            raise InputError("--objective fwmp needs --window")
        if args.window < 1:
            raise InputError("--window must be at least 1")
        return Objective.fwmp(args.window)
    if args.window is not None:
        raise InputError("--window only applies to fwmp")
    return Objective.bwmp()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    game = _load(args.game)
    counts = {o: len(game.vertices_of(o)) for o in Owner}
    print(f"valid: {game.name}, {len(game)} vertices "
          f"({counts[Owner.MAX]} max, {counts[Owner.MIN]} min, {counts[Owner.RANDOM]} rand), "
          f"{game.edge_count()} edges")
    return OK


def cmd_verify(args) -> int:
    game = _load(args.game)
    objective = _objective(args)
    try:
        vector = parse_certificate(_read(args.certificate), game)
        report = verify(game, vector, objective, args.bound)
    except GameError as exc:
        raise InputError(f"{args.certificate}: {exc}") from None
    text = format_report(report, game)
    if report.accepted and args.strategies:
        text += "".join(format_machine(m, game) for m in report.synthesized if m is not None)
    _emit(text, args.output)
    return OK if report.accepted else REJECTED


def cmd_solve(args) -> int:
    game = _load(args.game)
    try:
        report = solve(game, _objective(args))
    except SolveError as exc:
        print(f"unsolved: {exc}", file=sys.stderr)
        return REJECTED
    _emit(format_solve_report(report), args.output)
    return OK


def cmd_almost_sure(args) -> int:
    game = _load(args.game)
    objective = _objective(args)
    player = Owner.parse(args.player)
    if player is Owner.RANDOM:
        raise InputError("--player must be max or min")
    try:
        threshold = parse_rational(args.threshold)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if objective.is_fwmp:
        res = almost_sure_fwmp(game, player, objective.window, threshold, args.strict)
    else:
        res = almost_sure_bwmp(game, player, threshold, args.strict)
    machine = res.strategy
    rel = (">" if args.strict else ">=") if player is Owner.MAX else ("<" if args.strict else "<=")
    lines = [f"# {player.value} wants {objective} {rel} {fmt(threshold)} almost surely",
             "winning " + " ".join(game.names(sorted(res.winning)))]
    text = "\n".join(lines) + "\n"
    if machine is not None:
        text += format_machine(machine, game)
    else:
        text += "# no finite-memory strategy is produced for this side\n"
    _emit(text, args.output)
    return OK


def cmd_eval_lasso(args) -> int:
    game = _load(args.game)
    objective = _objective(args)
    try:
        lasso = parse_lasso(args.lasso, game)
    except GameError as exc:
        raise InputError(str(exc)) from None
    if objective.is_fwmp:
        value = fwmp_value_lasso(lasso, game, objective.window)
    else:
        value = bwmp_value_lasso(lasso, game)
    _emit(fmt(value) + "\n", args.output)
    return OK


def cmd_simulate(args) -> int:
    game = _load(args.game)
    objective = _objective(args)
    try:
        machines = parse_machines(_read(args.profile), game)
    except GameError as exc:
        raise InputError(f"{args.profile}: {exc}") from None
    smax, smin = split_profile(machines)
    # a player without a machine in the file plays its first successor everywhere
    smax = smax or StrategyMachine.memoryless(game, Owner.MAX)
    smin = smin or StrategyMachine.memoryless(game, Owner.MIN)
    if args.start not in game.index:
        raise InputError(f"unknown vertex {args.start}")
    try:
        est = monte_carlo_value(game, (smax, smin), game.index[args.start], objective,
                                args.episodes, args.horizon, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(f"estimate {fmt(est.mean)} ~ {float(est.mean):.6f} +- {est.radius:.6f} "
          f"({est.episodes} episodes, horizon {est.horizon}, seed {args.seed})")
    return OK


def cmd_export_dot(args) -> int:
    game = _load(args.game)
    vector = None
    if args.classes:
        try:
            vector = parse_certificate(_read(args.classes), game)
        except GameError as exc:
            raise InputError(f"{args.classes}: {exc}") from None
    _emit(to_dot(game, vector), args.output)
    return OK


def cmd_gen_ssg(args) -> int:
    game = _load(args.game)
    names = [t for t in args.target.split(",") if t]
    unknown = [t for t in names if t not in game.index]
    if unknown or not names:
        raise InputError(f"unknown target vertices: {', '.join(unknown) or '(none given)'}")
    _emit(format_game(ssg_to_fwmp(game, game.indices(names))), args.output)
    return OK


def _objective_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--objective", choices=("fwmp", "bwmp"), required=True)
    p.add_argument("--window", type=int, help="window length for fwmp")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="windowgames",
        description="Expected window mean-payoff values of stochastic games.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and check a game file")
    p.add_argument("game")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("verify", help="check a value certificate")
    p.add_argument("game")
    p.add_argument("certificate")
    _objective_flags(p)
    p.add_argument("--bound", type=int, help="denominator bound (default: worst case)")
    p.add_argument("--strategies", action="store_true", help="print optimal strategies")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("solve", help="compute the expected value vector")
    p.add_argument("game")
    _objective_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("almost-sure", help="almost-sure threshold winning region")
    p.add_argument("game")
    _objective_flags(p)
    p.add_argument("--threshold", required=True)
    p.add_argument("--player", choices=("max", "min"), required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_almost_sure)

    p = sub.add_parser("eval-lasso", help="window value of an ultimately periodic play")
    p.add_argument("game")
    p.add_argument("--lasso", required=True, help='"stem;cycle", vertices comma separated')
    _objective_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_eval_lasso)

    p = sub.add_parser("simulate", help="Monte Carlo estimate for a strategy profile")
    p.add_argument("game")
    p.add_argument("--profile", required=True, help="file with strategy blocks")
    p.add_argument("--start", required=True)
    _objective_flags(p)
    p.add_argument("--episodes", type=int, default=1000)
    p.add_argument("--horizon", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_simulate)

    p = sub.add_parser("export-dot", help="Graphviz rendering")
    p.add_argument("game")
    p.add_argument("--classes", help="certificate whose values group vertices")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_export_dot)

    p = sub.add_parser("gen-ssg", help="window game from a reachability game")
    p.add_argument("game")
    p.add_argument("--target", required=True, help="comma separated target vertices")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_gen_ssg)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse would read "--threshold -1/2" as two flags
    out = []
    for word in argv:
        if out and out[-1] == "--threshold" and word.startswith("-"):
            out[-1] = f"--threshold={word}"
        else:
            out.append(word)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    try:
        return args.run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
