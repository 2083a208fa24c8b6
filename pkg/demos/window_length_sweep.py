"""How values move as the window grows, fixed window versus bounded window.

Run:  python demos/window_length_sweep.py
"""
import numpy as np

from windowgames import Objective, fixtures, solve
from windowgames.generate import random_game

game = fixtures.memory()
for ell in range(1, 6):
    print(f"memory FWMP({ell}) =", [str(x) for x in solve(game, Objective.fwmp(ell)).vector])
print("memory BWMP    =", [str(x) for x in solve(game, Objective.bwmp()).vector])

# a batch of small random games; every column should dominate the previous one
rng = np.random.default_rng(5)
table = []
for seed in rng.integers(0, 10**6, size=8):
    g = random_game(int(seed), 3)
    row = [solve(g, Objective.fwmp(ell)).vector[0] for ell in (1, 2, 3)]
    row.append(solve(g, Objective.bwmp()).vector[0])
    table.append([float(x) for x in row])

table = np.array(table)
print("\n  fwmp1  fwmp2  fwmp3   bwmp")
print(np.array2string(table, precision=3, floatmode="fixed"))
print("monotone in the window:", bool(np.all(np.diff(table, axis=1) >= 0)))
