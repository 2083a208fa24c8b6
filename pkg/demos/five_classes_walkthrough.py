"""Solve the fourteen-vertex five-class game and look at what comes out.

Run:  python demos/five_classes_walkthrough.py
"""
import numpy as np

from windowgames import Objective, fixtures, solve, verify
from windowgames.verifier import format_report

game = fixtures.five_classes()
objective = Objective.fwmp(2)

report = solve(game, objective)

# values as floats, one row per class
values = np.array([float(x) for x in report.vector])
for level in np.unique(values):
    members = [game.ids[v] for v in np.flatnonzero(values == level)]
    print(f"{level:+.0f}: {' '.join(members)}")

# how each class value was found: theta means a window-mean candidate,
# linsys means it came out of the boundary linear system
for value, how in report.provenance:
    print(f"class {value}: {how}")

system = report.linear_system
print("boundary system solution", [str(x) for x in system.solution])
print("Q_B =", np.array(system.q_b, dtype=float))

# the certificate check on its own, no solving involved
print(format_report(verify(game, report.vector, objective), game))

# bump one vertex and watch the checker name what broke
bad = list(report.vector)
bad[game.index["v8"]] += 1
print("perturbed v8:", verify(game, bad, objective, synthesize=False).failure())
