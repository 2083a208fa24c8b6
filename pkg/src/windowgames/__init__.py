"""Expected window mean-payoff values of turn-based stochastic games."""
from windowgames.game import GameError, Owner, StochasticGame, parse_game
from windowgames.objective import Objective
from windowgames.solver import compute_bounds, monte_carlo_value, solve
from windowgames.verifier import parse_certificate, verify
from windowgames.window import bwmp_value_lasso, fwmp_value_lasso, parse_lasso

__all__ = [
    "GameError", "Objective", "Owner", "StochasticGame", "bwmp_value_lasso", "compute_bounds",
    "fwmp_value_lasso", "monte_carlo_value", "parse_certificate", "parse_game", "parse_lasso",
    "solve", "verify",
]
