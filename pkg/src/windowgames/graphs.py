"""Attractors, strongly connected components, end components and mean cycles."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .game import Owner, StochasticGame


@dataclass(frozen=True)
class AttractorResult:
    attractor: frozenset[int]
    witness: dict[int, int]
    complement_trap: frozenset[int]
    rank: dict[int, int]


def positive_attractor(game: StochasticGame, player: Owner, target: Iterable[int],
                       within: Iterable[int] | None = None,
                       avoid: Iterable[int] = ()) -> AttractorResult:
    """Vertices from which ``player`` reaches ``target`` with positive probability.

    Computed in rounds so every attracted vertex gets a rank; the witness at an
    owned vertex is its smallest-index successor of strictly lower rank.
    Vertices in ``avoid`` are never added.
    """
    dom = set(range(len(game))) if within is None else set(within)
    avoid = set(avoid)
    target = set(target)
    if not target <= dom:
        raise ValueError("target must lie inside the region")
    rank = {v: 0 for v in target}
    frontier = set(target)
    level = 0
    while frontier:
        level += 1
        cand = {u for v in frontier for u in game.pred[v]
                if u in dom and u not in rank and u not in avoid}
        added = set()
        for u in sorted(cand):
            inside = [w for w in game.succ[u] if w in dom]
            own = game.owner[u]
            if own is player or own is Owner.RANDOM:
                ok = any(w in rank for w in inside)
            else:
                ok = all(w in rank for w in inside)
            if ok:
                added.add(u)
        for u in added:
            rank[u] = level
        frontier = added
    witness = {}
    for v, r in rank.items():
        if r > 0 and game.owner[v] is player:
            witness[v] = min(w for w in game.succ[v] if w in rank and rank[w] < r)
    attr = frozenset(rank)
    return AttractorResult(attr, witness, frozenset(dom - attr), rank)


def is_trap(game: StochasticGame, player: Owner, region: Iterable[int]) -> bool:
    """True if ``player`` cannot leave ``region`` (and chance cannot either)."""
    region = set(region)
    for v in region:
        inside = [u in region for u in game.succ[v]]
        if game.owner[v] is player.opponent:
            if not any(inside):
                return False
        elif not all(inside):
            return False
    return True


def sccs(game: StochasticGame, within: Iterable[int] | None = None,
         edges: dict[int, Iterable[int]] | None = None) -> list[list[int]]:
    """Strongly connected components of the graph restricted to ``within``.

    ``edges`` optionally overrides the successor lists. Components come back
    sorted internally and ordered by their smallest vertex.
    """
    verts = sorted(range(len(game)) if within is None else set(within))
    if not verts:
        return []
    local = {v: i for i, v in enumerate(verts)}
    rows, cols = [], []
    for v in verts:
        for u in (edges[v] if edges is not None else game.succ[v]):
            if u in local:
                rows.append(local[v])
                cols.append(local[u])
    n = len(verts)
    mat = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(mat, directed=True, connection="strong")
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(verts[i])
    return sorted(groups.values(), key=lambda c: c[0])


def bottom_sccs(game: StochasticGame, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    result = []
    for comp in sccs(game, within):
        cset = set(comp)
        if all(u in cset for v in comp for u in game.succ[v]):
            result.append(frozenset(comp))
    return result


def bsccs(chain) -> list[frozenset[int]]:
    """Bottom SCCs of an induced chain, as sets of chain-state indices."""
    return bottom_sccs(chain.arena)


def reachable(game: StochasticGame, sources: Iterable[int],
              edges: dict[int, Iterable[int]] | None = None) -> set[int]:
    seen = set(sources)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for u in (edges[v] if edges is not None else game.succ[v]):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


@dataclass(frozen=True)
class MecDecomposition:
    mecs: tuple[frozenset[int], ...]
    membership: tuple[int | None, ...]


def _close(game: StochasticGame, region: set[int]) -> set[int]:
    """Largest subset where random vertices keep all successors and others keep one."""
    region = set(region)
    changed = True
    while changed:
        changed = False
        for v in sorted(region):
            out = game.succ[v]
            if game.owner[v] is Owner.RANDOM:
                bad = any(u not in region for u in out)
            else:
                bad = not any(u in region for u in out)
            if bad:
                region.discard(v)
                changed = True
    return region


def mec_decompose(game: StochasticGame, within: Iterable[int] | None = None) -> MecDecomposition:
    """Maximal end components, with every non-random vertex treated as controllable."""
    start = set(range(len(game))) if within is None else set(within)
    found = []
    work = [start]
    while work:
        region = _close(game, work.pop())
        if not region:
            continue
        comps = sccs(game, region)
        if len(comps) == 1:
            found.append(frozenset(region))
        else:
            work.extend(set(c) for c in comps)
    found.sort(key=min)
    member: list[int | None] = [None] * len(game)
    for i, m in enumerate(found):
        for v in m:
            member[v] = i
    return MecDecomposition(tuple(found), tuple(member))


def _karp(game: StochasticGame, comp: list[int]) -> Fraction:
    """Minimum cycle mean of one strongly connected component (Karp's recurrence)."""
    n = len(comp)
    cset = set(comp)
    src = comp[0]
    inf = None
    dist = [{v: inf for v in comp} for _ in range(n + 1)]
    dist[0][src] = Fraction(0)
    for k in range(1, n + 1):
        prev, cur = dist[k - 1], dist[k]
        for v in comp:
            d = prev[v]
            if d is None:
                continue
            for u in game.succ[v]:
                if u in cset:
                    cand = d + game.payoff[v, u]
                    if cur[u] is None or cand < cur[u]:
                        cur[u] = cand
    best = None
    for v in comp:
        if dist[n][v] is None:
            continue
        worst = None
        for k in range(n):
            if dist[k][v] is None:
                continue
            val = (dist[n][v] - dist[k][v]) / (n - k)
            if worst is None or val > worst:
                worst = val
        if worst is not None and (best is None or worst < best):
            best = worst
    return best


def _tight_cycle(game: StochasticGame, comp: list[int], mean: Fraction) -> list[int]:
    """A cycle of mean ``mean`` found among tight edges of the shifted graph."""
    cset = set(comp)
    dist = {v: Fraction(0) for v in comp}
    for _ in range(len(comp)):
        changed = False
        for v in comp:
            for u in game.succ[v]:
                if u in cset:
                    cand = dist[v] + game.payoff[v, u] - mean
                    if cand < dist[u]:
                        dist[u] = cand
                        changed = True
        if not changed:
            break
    tight = {v: [u for u in game.succ[v]
                 if u in cset and dist[v] + game.payoff[v, u] - mean == dist[u]] for v in comp}
    color: dict[int, int] = {}
    for root in comp:
        if root in color:
            continue
        stack = [(root, iter(tight[root]))]
        path = [root]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = 2
                stack.pop()
                path.pop()
                continue
            if color.get(nxt) == 1:
                return path[path.index(nxt):]
            if nxt not in color:
                color[nxt] = 1
                stack.append((nxt, iter(tight[nxt])))
                path.append(nxt)
    raise AssertionError("no tight cycle found")


def min_mean_cycle(game: StochasticGame,
                   within: Iterable[int] | None = None) -> tuple[Fraction, list[int]]:
    """Minimum mean over simple cycles inside ``within`` and one cycle attaining it.

    The cycle is returned as ``[v0, v1, ..., vk]`` meaning edges v0->v1, ...,
    vk->v0.
    """
    best, best_comp = None, None
    for comp in sccs(game, within):
        if len(comp) == 1 and comp[0] not in game.succ[comp[0]]:
            continue
        mean = _karp(game, comp)
        if best is None or mean < best:
            best, best_comp = mean, comp
    if best is None:
        raise ValueError("the region contains no cycle")
    return best, _tight_cycle(game, best_comp, best)


def cycle_mean(game: StochasticGame, cycle: list[int]) -> Fraction:
    total = sum(game.payoff[a, b] for a, b in zip(cycle, cycle[1:] + cycle[:1]))
    return Fraction(total) / len(cycle)
