"""Exact two-phase simplex over the rationals with Bland's rule.

The tableau is stored fraction-free: integer entries ``T`` together with a
positive common denominator ``D`` so that the true tableau is ``T / D``.
After a pivot on ``(r, s)`` the new denominator is ``T[r][s]`` and every
other row is updated by an exact integer division by the old ``D``.

Problems are given in standard form ``A x = b, x >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

__all__ = ["LPResult", "solve_lp", "find_feasible"]


@dataclass
class LPResult:
    """Outcome of :func:`solve_lp`.

    status is ``"optimal"``, ``"infeasible"`` or ``"unbounded"``.

    * optimal: ``x`` primal solution, ``y`` duals with ``c - y A >= 0`` for
      minimization, ``value`` the objective.
    * infeasible: ``farkas`` with ``farkas @ A >= 0`` column-wise and
      ``farkas @ b < 0``.
    * unbounded: ``x`` a feasible point and ``ray`` a direction with
      ``A ray = 0, ray >= 0, c @ ray < 0``.
    """

    status: str
    x: list[Fraction] | None = None
    y: list[Fraction] | None = None
    value: Fraction | None = None
    farkas: list[Fraction] | None = None
    ray: list[Fraction] | None = None
    basis: list[int] = field(default_factory=list)
    pivots: int = 0


class _Tableau:
    def __init__(self, rows: list[list[int]], n_cols: int):
        # rows carry n_cols entries followed by the right-hand side
        self.T = rows
        self.D = 1
        self.m = len(rows)
        self.n = n_cols
        self.basis = [n_cols - self.m + i for i in range(self.m)]
        self.pivots = 0
        self.bland = False
        self.stall_limit = 50

    def pivot(self, r: int, s: int, objective: list[int]):
        T = self.T
        prow = T[r]
        p = prow[s]
        D = self.D
        for i in range(self.m):
            if i == r:
                continue
            row = T[i]
            f = row[s]
            if f:
                T[i] = [(p * x - f * y) // D for x, y in zip(row, prow)]
            elif p != D:
                T[i] = [p * x // D for x in row]
        f = objective[s]
        if f:
            objective[:] = [(p * x - f * y) // D for x, y in zip(objective, prow)]
        elif p != D:
            objective[:] = [p * x // D for x in objective]
        if p < 0:
            # keep D positive; T / D is unchanged by negating both
            for i in range(self.m):
                T[i] = [-x for x in T[i]]
            objective[:] = [-x for x in objective]
            p = -p
        self.D = p
        self.basis[r] = s
        self.pivots += 1

    def entering(self, objective: list[int], allowed: int) -> int | None:
        if self.bland:
            for j in range(allowed):
                if objective[j] < 0:
                    return j
            return None
        best, best_val = None, 0
        for j in range(allowed):
            if objective[j] < best_val:
                best, best_val = j, objective[j]
        return best

    def leaving(self, s: int) -> int | None:
        best = None
        T = self.T
        rhs = self.n
        for i in range(self.m):
            a = T[i][s]
            if a <= 0:
                continue
            if best is None:
                best = i
                continue
            bb = T[best]
            lhs = T[i][rhs] * bb[s]
            rhs_ = bb[rhs] * a
            if lhs < rhs_ or (lhs == rhs_ and self.basis[i] < self.basis[best]):
                best = i
        return best

    def run(self, objective: list[int], allowed: int) -> str:
        degenerate = 0
        while True:
            s = self.entering(objective, allowed)
            if s is None:
                return "optimal"
            r = self.leaving(s)
            if r is None:
                self.unbounded_column = s
                return "unbounded"
            if self.T[r][self.n] == 0:
                degenerate += 1
                if degenerate >= self.stall_limit:
                    # Bland's rule from here on cannot cycle
                    self.bland = True
            else:
                degenerate = 0
            self.pivot(r, s, objective)


def _integer_system(A, b):
    """Integer form of ``A x = b`` by rescaling columns, then rows.

    Column j is multiplied by ``col[j]`` (so ``x_j = col[j] * x'_j / rhs``),
    the right-hand side by ``rhs``; each row is then divided by its gcd and
    sign-flipped to a nonnegative right-hand side, recorded in ``mult`` so
    that row i of the integer system is ``mult[i]`` times the original row.
    Scaling columns rather than rows keeps 0/1 blocks small when only a few
    columns carry large denominators.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    F = [[Fraction(x) for x in row] for row in A]
    bb = [Fraction(x) for x in b]
    col = [reduce(lcm, (F[i][j].denominator for i in range(m)), 1) for j in range(n)]
    rhs = reduce(lcm, (x.denominator for x in bb), 1)
    rows = []
    mult = []
    for i in range(m):
        ints = [int(F[i][j] * col[j]) for j in range(n)] + [int(bb[i] * rhs)]
        g = reduce(gcd, ints, 0) or 1
        if ints[-1] < 0:
            g = -g
        rows.append([v // g for v in ints])
        # integer row = (col-scaled row) / g; dual multipliers pick up 1/g
        mult.append(Fraction(1, g))
    return rows, mult, col, rhs


def solve_lp(
    A: Sequence[Sequence],
    b: Sequence,
    c: Sequence | None = None,
    maximize: bool = False,
    initial_basis: Sequence[int] | None = None,
) -> LPResult:
    """Solve ``min/max c x`` s.t. ``A x = b, x >= 0`` exactly.

    With ``c`` omitted only feasibility is decided (phase 1).
    ``initial_basis`` optionally lists columns to pivot in before phase 1
    starts (a crash basis, e.g. from a floating-point solve); it only
    affects speed, never the answer.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    scaled, mult, col, rhs_scale = _integer_system(A, b)
    width = n + m
    rows = []
    for i, row in enumerate(scaled):
        art = [0] * m
        art[i] = 1
        rows.append(row[:n] + art + [row[n]])
    tab = _Tableau(rows, width)

    # phase 1: minimize the sum of artificials
    obj = [0] * (width + 1)
    for row in rows:
        for j in range(n):
            obj[j] -= row[j]
        obj[width] -= row[width]

    if initial_basis:
        for s in initial_basis:
            if not 0 <= s < n or s in tab.basis:
                continue
            # pivot only where it keeps the basic solution feasible
            r = tab.leaving(s)
            if r is not None and tab.basis[r] >= n:
                tab.pivot(r, s, obj)

    tab.run(obj, n)
    D = tab.D
    phase1 = Fraction(-obj[width], D)
    if phase1 > 0:
        # y_i = 1 - reduced cost of artificial i solves the phase-1 dual
        y = [1 - Fraction(obj[n + i], D) for i in range(m)]
        farkas = [-y[i] * mult[i] for i in range(m)]
        return LPResult("infeasible", farkas=farkas, basis=list(tab.basis), pivots=tab.pivots)

    # drive zero-level artificials out where possible
    for r in range(m):
        if tab.basis[r] < n:
            continue
        row = tab.T[r]
        s = next((j for j in range(n) if row[j] != 0), None)
        if s is None:
            continue  # redundant row
        tab.pivot(r, s, obj)

    if c is None:
        x = _unscale(_primal(tab, n), col, rhs_scale)
        return LPResult("optimal", x=x, value=Fraction(0), basis=list(tab.basis), pivots=tab.pivots)

    cost = [Fraction(v) * k for v, k in zip(c, col)]
    if maximize:
        cost = [-v for v in cost]
    den = reduce(lcm, (v.denominator for v in cost), 1)
    ci = [int(v * den) for v in cost] + [0] * m
    D = tab.D
    obj = [D * v for v in ci] + [0]
    for r, j in enumerate(tab.basis):
        cj = ci[j]
        if cj:
            row = tab.T[r]
            obj = [o - cj * x for o, x in zip(obj, row)]
    # artificials may stay basic only on redundant rows (value 0)
    status = tab.run(obj, n)
    x = _unscale(_primal(tab, n), col, rhs_scale)
    D = tab.D
    if status == "unbounded":
        s = tab.unbounded_column
        ray = [Fraction(0)] * n
        ray[s] = Fraction(1)
        for r, j in enumerate(tab.basis):
            if j < n:
                ray[j] = Fraction(-tab.T[r][s], D)
        ray = [v * k for v, k in zip(ray, col)]
        return LPResult("unbounded", x=x, ray=ray, basis=list(tab.basis), pivots=tab.pivots)
    value = sum(Fraction(v) * xv for v, xv in zip(c, x))
    # dual of the scaled rows, from the artificial reduced costs (cost 0)
    y_scaled = [Fraction(-obj[n + i], D) / den for i in range(m)]
    y = [y_scaled[i] * mult[i] for i in range(m)]
    if maximize:
        y = [-v for v in y]
    return LPResult("optimal", x=x, y=y, value=value, basis=list(tab.basis), pivots=tab.pivots)


def _primal(tab: _Tableau, n: int) -> list[Fraction]:
    x = [Fraction(0)] * n
    for r, j in enumerate(tab.basis):
        if j < n:
            x[j] = Fraction(tab.T[r][tab.n], tab.D)
    return x


def _unscale(x, col, rhs_scale):
    return [v * k / rhs_scale for v, k in zip(x, col)]


def find_feasible(A, b, initial_basis=None) -> LPResult:
    return solve_lp(A, b, None, initial_basis=initial_basis)
