"""Exact rational linear algebra."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class SingularMatrix(ArithmeticError):
    pass


def solve_dense(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``a x = b`` by Gaussian elimination over the rationals."""
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix(f"no pivot in column {col}")
        m[col], m[piv] = m[piv], m[col]
        pr = m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / pr[col]
                row = m[r]
                for k in range(col, n + 1):
                    row[k] -= f * pr[k]
    return [m[i][n] / m[i][i] for i in range(n)]


def determinant(a: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(a)
    m = [list(map(Fraction, row)) for row in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / m[col][col]
                for k in range(col, n):
                    m[r][k] -= f * m[col][k]
    return det


def solve_fixed_point(rows: dict[int, tuple[dict[int, Fraction], Fraction]]) -> dict[int, Fraction]:
    """Solve x_i = sum_j a_ij x_j + b_i for sparse, nonsingular systems.

    ``rows[i] = (a_i, b_i)`` with ``a_i`` a dict over unknowns. Unknowns are
    eliminated one at a time, which keeps fill-in small on the nearly
    deterministic chains this library produces.
    """
    coef = {i: dict(a) for i, (a, _) in rows.items()}
    const = {i: Fraction(b) for i, (_, b) in rows.items()}
    users: dict[int, set[int]] = {i: set() for i in rows}
    for i, a in coef.items():
        for j in a:
            users[j].add(i)
    order = sorted(rows)
    done = set()
    for k in order:
        a_k = coef[k]
        self_loop = a_k.pop(k, 0)
        users[k].discard(k)
        if self_loop:
            if self_loop == 1:
                raise SingularMatrix(f"unknown {k} is trapped in a closed class")
            s = 1 / (1 - self_loop)
            for j in a_k:
                a_k[j] *= s
            const[k] *= s
        done.add(k)
        for i in list(users[k]):
            if i in done:
                continue
            a_i = coef[i]
            f = a_i.pop(k)
            for j, v in a_k.items():
                if j in a_i:
                    a_i[j] += f * v
                    if a_i[j] == 0:
                        del a_i[j]
                        users[j].discard(i)
                else:
                    a_i[j] = f * v
                    users[j].add(i)
            const[i] += f * const[k]
        users[k] = {i for i in users[k] if i in done}
    x: dict[int, Fraction] = {}
    for k in reversed(order):
        x[k] = const[k] + sum((v * x[j] for j, v in coef[k].items()), Fraction(0))
    return x
