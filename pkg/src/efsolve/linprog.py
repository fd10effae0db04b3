"""Exact linear programming over the rationals.

A dense two-phase simplex with Bland's rule.  Problems handled here are tiny
(tens to a few hundred variables) and must be decided exactly, so Fraction
pivoting is both adequate and the simplest correct choice.

Problem form::

    maximize    c . x
    subject to  A_ub x <= b_ub
                A_eq x == b_eq
                x >= 0
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Row = Sequence[Fraction | int]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] = ()
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _pivot(rows: list[list[Fraction]], obj: list[Fraction], r: int, c: int) -> None:
    prow = rows[r]
    piv = prow[c]
    if piv != 1:
        inv = 1 / piv
        prow[:] = [v * inv if v else v for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(rows):
        if i == r:
            continue
        f = row[c]
        if f:
            for j in nz:
                row[j] -= f * prow[j]
    f = obj[c]
    if f:
        for j in nz:
            obj[j] -= f * prow[j]


def _run(rows: list[list[Fraction]], obj: list[Fraction], basis: list[int], ncols: int) -> bool:
    """Maximize in place.  ``obj`` holds reduced costs and ``-z`` in its last slot.

    Returns False when the problem is unbounded.
    """
    while True:
        enter = next((j for j in range(ncols) if obj[j] > 0), None)
        if enter is None:
            return True
        best: tuple[Fraction, int, int] | None = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                key = (row[-1] / a, basis[i], i)
                if best is None or key < best:
                    best = key
        if best is None:
            return False
        r = best[2]
        _pivot(rows, obj, r, enter)
        basis[r] = enter


def linprog(
    c: Row,
    A_ub: Sequence[Row] = (),
    b_ub: Row = (),
    A_eq: Sequence[Row] = (),
    b_eq: Row = (),
) -> LPResult:
    """Solve the LP exactly; see the module docstring for the form."""
    n = len(c)
    m_ub, m_eq = len(A_ub), len(A_eq)
    m = m_ub + m_eq
    # columns: n originals, m_ub slacks, m artificials, rhs
    ncols = n + m_ub
    rows: list[list[Fraction]] = []
    for k, (a, b) in enumerate(zip(A_ub, b_ub)):
        row = [Fraction(v) for v in a] + [_ZERO] * (m_ub + m) + [Fraction(b)]
        row[n + k] = _ONE
        rows.append(row)
    for a, b in zip(A_eq, b_eq):
        rows.append([Fraction(v) for v in a] + [_ZERO] * (m_ub + m) + [Fraction(b)])
    for i, row in enumerate(rows):
        if len(row) != n + m_ub + m + 1:
            raise ValueError("constraint rows must have len(c) entries")
        if row[-1] < 0:
            row[:] = [-v for v in row]
        row[ncols + i] = _ONE
    basis = [ncols + i for i in range(m)]

    # phase 1: maximize -sum(artificials)
    total = ncols + m
    obj = [_ZERO] * (total + 1)
    for row in rows:
        for j in range(ncols):
            obj[j] += row[j]
        obj[-1] += row[-1]
    # obj[-1] = -z where z = -sum(b); store as sum(b) so it reads -z
    _run(rows, obj, basis, total)
    if obj[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(len(rows)):
        if basis[i] >= ncols:
            col = next((j for j in range(ncols) if rows[i][j]), None)
            if col is None:
                continue
            _pivot(rows, obj, i, col)
            basis[i] = col
        keep.append(i)
    rows = [rows[i][:ncols] + [rows[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    # phase 2
    cost = [Fraction(v) for v in c] + [_ZERO] * m_ub
    obj = cost + [_ZERO]
    for row, b in zip(rows, basis):
        cb = cost[b]
        if cb:
            for j in range(ncols + 1):
                obj[j] -= cb * row[j]
    if not _run(rows, obj, basis, ncols):
        return LPResult(UNBOUNDED)
    x = [_ZERO] * ncols
    for row, b in zip(rows, basis):
        x[b] = row[-1]
    return LPResult(OPTIMAL, tuple(x[:n]), -obj[-1])


def feasible_point(
    n: int,
    A_ub: Sequence[Row] = (),
    b_ub: Row = (),
    A_eq: Sequence[Row] = (),
    b_eq: Row = (),
) -> tuple[Fraction, ...] | None:
    """Any nonnegative point satisfying the constraints, or None."""
    res = linprog([0] * n, A_ub, b_ub, A_eq, b_eq)
    return res.x if res.status == OPTIMAL else None
