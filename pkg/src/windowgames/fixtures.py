"""Small games with known values, shipped as package data."""
from __future__ import annotations

from fractions import Fraction
from importlib import resources

from .game import StochasticGame, parse_game

NAMES = ("five_classes", "left_right", "memory", "risky_choice")

# expected FWMP(2) values of five_classes, in vertex order v1..v14
FIVE_CLASS_VALUES = tuple(Fraction(x) for x in
                          (-2, -1, -1, -1, -1, 0, 0, 0, 0, 1, 1, 2, 2, 2))


def game_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(name)
    return resources.files("windowgames.games").joinpath(f"{name}.game").read_text()


def load(name: str) -> StochasticGame:
    return parse_game(game_text(name))


def five_classes() -> StochasticGame:
    return load("five_classes")


def left_right() -> StochasticGame:
    return load("left_right")


def memory() -> StochasticGame:
    return load("memory")


def risky_choice() -> StochasticGame:
    return load("risky_choice")
