"""Exact linear algebra over the rationals: matrix rank and a small simplex
solver used to find which edges can carry flow.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(map(int, r)) for r in rows]
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(n_cols):
        pivot = next((k for k in range(r, n_rows) if m[k][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for k in range(r + 1, n_rows):
            for cc in range(c + 1, n_cols):
                m[k][cc] = (m[k][cc] * m[r][c] - m[r][cc] * m[k][c]) // prev
            m[k][c] = 0
        prev = m[r][c]
        r += 1
        if r == n_rows:
            break
    return r


class Infeasible(Exception):
    pass


def _pivot(T: list[list[Fraction]], basis: list[int], row: int, col: int):
    p = T[row][col]
    T[row] = [x / p for x in T[row]]
    for k in range(len(T)):
        if k != row and T[k][col] != 0:
            f = T[k][col]
            T[k] = [x - f * y for x, y in zip(T[k], T[row])]
    basis[row] = col


def _run(T, basis, allowed: int):
    # maximise the objective stored in the last row as reduced costs (row holds -c);
    # Bland's rule keeps the method finite on degenerate problems
    obj = T[-1]
    while True:
        col = next((j for j in range(allowed) if obj[j] < 0), None)
        if col is None:
            return
        best = None
        for k in range(len(T) - 1):
            if T[k][col] > 0:
                ratio = T[k][-1] / T[k][col]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[k] < basis[best[1]]):
                    best = (ratio, k)
        if best is None:
            raise ArithmeticError("unbounded linear program")
        _pivot(T, basis, best[1], col)
        obj = T[-1]


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, list[Fraction]]:
    """Maximise ``c.x`` subject to ``A x = b``, ``x >= 0``, exactly.

    Raises :class:`Infeasible` when the constraints have no solution.
    """
    n_rows = len(A)
    n_cols = len(c)
    rows = []
    for r, rhs in zip(A, b):
        r = [Fraction(x) for x in r]
        rhs = Fraction(rhs)
        if rhs < 0:
            r, rhs = [-x for x in r], -rhs
        rows.append((r, rhs))

    # phase one: artificial variables n_cols .. n_cols+n_rows-1
    width = n_cols + n_rows
    T = []
    for k, (r, rhs) in enumerate(rows):
        art = [Fraction(0)] * n_rows
        art[k] = Fraction(1)
        T.append(r + art + [rhs])
    phase1 = [Fraction(0)] * (width + 1)
    for r in T:
        for j in range(n_cols):
            phase1[j] -= r[j]
        phase1[-1] -= r[-1]
    T.append(phase1)
    basis = list(range(n_cols, width))
    _run(T, basis, n_cols)
    if T[-1][-1] != 0:
        raise Infeasible("no nonnegative solution")

    # drive remaining artificials out of the basis where possible
    for k in range(n_rows):
        if basis[k] >= n_cols:
            col = next((j for j in range(n_cols) if T[k][j] != 0), None)
            if col is not None:
                _pivot(T, basis, k, col)
    keep = [k for k in range(n_rows) if basis[k] < n_cols]
    T2 = [T[k][:n_cols] + [T[k][-1]] for k in keep]
    basis2 = [basis[k] for k in keep]

    obj = [-Fraction(x) for x in c] + [Fraction(0)]
    for k, bcol in enumerate(basis2):
        if obj[bcol] != 0:
            f = obj[bcol]
            obj = [x - f * y for x, y in zip(obj, T2[k])]
    T2.append(obj)
    _run(T2, basis2, n_cols)
    x = [Fraction(0)] * n_cols
    for k, bcol in enumerate(basis2):
        x[bcol] = T2[k][-1]
    return T2[-1][-1], x


def support(A: Sequence[Sequence[int]], b: Sequence[int]) -> set[int]:
    """Indices ``j`` for which some ``x >= 0`` with ``A x = b`` has ``x_j > 0``.

    Raises :class:`Infeasible` when the system has no nonnegative solution.
    """
    n_cols = len(A[0]) if A else 0
    if n_cols == 0:
        if any(b):
            raise Infeasible("no variables")
        return set()
    used: set[int] = set()
    for j in range(n_cols):
        if j in used:
            continue
        c = [0] * n_cols
        c[j] = 1
        value, x = maximize(c, A, b)
        used.update(k for k, xk in enumerate(x) if xk > 0)
    return used
