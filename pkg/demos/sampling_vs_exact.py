"""Check exact values against sampled plays of the synthesized strategies.

Run:  python demos/sampling_vs_exact.py
"""
from windowgames import Objective, fixtures, monte_carlo_value, solve

for name, ell in [("left_right", 2), ("risky_choice", 2), ("memory", 3)]:
    game = fixtures.load(name)
    objective = Objective.fwmp(ell)
    report = solve(game, objective)
    print(f"{name} FWMP({ell})")
    for v, exact in enumerate(report.vector):
        est = monte_carlo_value(game, report.strategies, v, objective,
                                episodes=500, horizon=100, seed=0)
        gap = abs(float(est.mean - exact))
        print(f"  {game.ids[v]:>3}  exact {str(exact):>6}  sampled {float(est.mean):+.3f}"
              f"  radius {est.radius:.3f}  {'ok' if gap <= est.radius else 'outside'}")

# risky_choice: the safer-looking move from v1 is the wrong one in expectation
game = fixtures.risky_choice()
smax, _ = solve(game, Objective.fwmp(2)).strategies
print("v1 ->", game.ids[smax.output[smax.initial][game.index["v1"]]])
