"""Graphviz rendering of games."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .game import Owner, StochasticGame, fmt

SHAPES = {Owner.MAX: "box", Owner.MIN: "circle", Owner.RANDOM: "diamond"}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(game: StochasticGame, vector: Sequence[Fraction] | None = None) -> str:
    """DOT text; with a value vector, each value class becomes a cluster.

    Edge labels show the payoff in red and, out of random vertices, the
    probability in blue.
    """
    lines = [f"digraph {_quote(game.name)} {{", "  rankdir=LR;"]

    def node(v: int) -> str:
        return (f"  {_quote(game.ids[v])} [shape={SHAPES[game.owner[v]]}];")

    if vector is None:
        lines.extend(node(v) for v in range(len(game)))
    else:
        for i, val in enumerate(sorted(set(vector))):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f"    label={_quote('value ' + fmt(val))};")
            lines.extend("  " + node(v) for v in range(len(game)) if vector[v] == val)
            lines.append("  }")
    for u, v in game.edges():
        label = f'<<font color="red">{fmt(game.payoff[u, v])}</font>'
        if game.owner[u] is Owner.RANDOM:
            label += f' <font color="blue">{fmt(game.prob[u, v])}</font>'
        label += ">"
        lines.append(f"  {_quote(game.ids[u])} -> {_quote(game.ids[v])} [label={label}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
