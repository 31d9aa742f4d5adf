"""A small exact linear-programming solver over the rationals.

Dense two-phase tableau simplex with Bland's rule, so it always terminates
and is deterministic. Strict feasibility questions are answered by the
max-min-slack trick: maximize a common slack ``t`` and test ``t > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def _pivot(T: list[list[Fraction]], cost: list[Fraction], row: int, col: int) -> None:
    piv = T[row][col]
    T[row] = [v / piv for v in T[row]]
    pr = T[row]
    for i, r in enumerate(T):
        if i != row and r[col] != 0:
            f = r[col]
            T[i] = [a - f * b for a, b in zip(r, pr)]
    if cost[col] != 0:
        f = cost[col]
        cost[:] = [a - f * b for a, b in zip(cost, pr)]


def _iterate(T, cost, basis, allowed: int) -> str:
    """Run simplex pivots (maximization) over the first ``allowed`` columns."""
    while True:
        col = next((j for j in range(allowed) if cost[j] > 0), None)
        if col is None:
            return "optimal"
        best = None
        for i, r in enumerate(T):
            if r[col] > 0:
                ratio = r[-1] / r[col]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        row = best[1]
        _pivot(T, cost, row, col)
        basis[row] = col


def maximize_standard(A: Sequence[Sequence], b: Sequence, c: Sequence) -> LPResult:
    """Maximize ``c x`` subject to ``A x = b``, ``x >= 0``."""
    m, n = len(A), len(c)
    T = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row, rhs = [-v for v in row], -rhs
        T.append(row + [Fraction(int(k == i)) for k in range(m)] + [rhs])
    basis = list(range(n, n + m))
    # phase 1: maximize -(sum of artificials)
    cost = [sum((T[i][j] for i in range(m)), Fraction(0)) for j in range(n)]
    cost += [Fraction(0)] * m + [sum((T[i][-1] for i in range(m)), Fraction(0))]
    _iterate(T, cost, basis, n + m)
    if cost[-1] != 0:
        return LPResult("infeasible")
    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, cost, i, col)
            basis[i] = col
        i += 1
    T = [r[:n] + [r[-1]] for r in T]
    cost = [Fraction(v) for v in c] + [Fraction(0)]
    for i, bj in enumerate(basis):
        if cost[bj] != 0:
            f = cost[bj]
            cost = [a - f * v for a, v in zip(cost, T[i])]
    status = _iterate(T, cost, basis, n)
    if status != "optimal":
        return LPResult(status)
    x = [Fraction(0)] * n
    for i, bj in enumerate(basis):
        x[bj] = T[i][-1]
    return LPResult("optimal", tuple(x), sum((ci * xi for ci, xi in zip(c, x)), Fraction(0)))


def maximize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: Sequence[bool] | None = None,
) -> LPResult:
    """Maximize ``c x`` under ``A_ub x <= b_ub`` and ``A_eq x = b_eq``.

    Variables are nonnegative unless flagged in ``free``.
    """
    n = len(c)
    free = list(free) if free is not None else [False] * n
    # column map: each free variable becomes x+ - x-
    cols: list[tuple[int, int]] = []
    for j in range(n):
        cols.append((j, 1))
        if free[j]:
            cols.append((j, -1))
    n_ub = len(A_ub)
    A, b = [], []
    for k, (row, rhs) in enumerate(zip(A_ub, b_ub)):
        A.append([s * row[j] for j, s in cols] + [int(i == k) for i in range(n_ub)])
        b.append(rhs)
    for row, rhs in zip(A_eq, b_eq):
        A.append([s * row[j] for j, s in cols] + [0] * n_ub)
        b.append(rhs)
    cc = [s * c[j] for j, s in cols] + [0] * n_ub
    if not A:
        if any(v != 0 for v in cc):
            return LPResult("unbounded")
        return LPResult("optimal", tuple(Fraction(0) for _ in range(n)), Fraction(0))
    res = maximize_standard(A, b, cc)
    if res.status != "optimal":
        return res
    x = [Fraction(0)] * n
    for k, (j, s) in enumerate(cols):
        x[j] += s * res.x[k]
    return LPResult("optimal", tuple(x), res.value)


def strict_interior_point(
    G: Sequence[Sequence], h: Sequence, E: Sequence[Sequence] = (), e: Sequence = (),
    box: Fraction | None = None,
) -> tuple[tuple[Fraction, ...], Fraction] | None:
    """A point with ``G y > h`` strictly and ``E y = e``, or None.

    Maximizes the smallest slack ``t`` (capped at 1); with ``box`` the
    variables are also confined to ``[-box, box]``, which keeps cone
    problems bounded. Returns ``(y, t)`` with ``t > 0`` on success.
    """
    n = len(G[0]) if G else len(E[0])
    A_ub, b_ub = [], []
    for row, rhs in zip(G, h):
        A_ub.append([-v for v in row] + [1])
        b_ub.append(-rhs)
    A_ub.append([0] * n + [1])
    b_ub.append(1)
    if box is not None:
        for j in range(n):
            unit = [int(k == j) for k in range(n)]
            A_ub.append(unit + [0])
            b_ub.append(box)
            A_ub.append([-u for u in unit] + [0])
            b_ub.append(box)
    A_eq = [list(row) + [0] for row in E]
    res = maximize([0] * n + [1], A_ub, b_ub, A_eq, list(e), free=[True] * (n + 1))
    if res.status != "optimal" or res.value <= 0:
        return None
    return res.x[:n], res.value
