"""Exact two-phase simplex over rationals, with Bland's rule.

Solves  min c.x  subject to  A x = b, x >= 0  in Fraction arithmetic, so
feasibility verdicts and optima are exact and deterministic.  On an
infeasible system the phase-1 dual is returned as a Farkas certificate:
a vector y with y.b > 0 and y.A_j <= 0 for every column j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


class PivotLimitError(RuntimeError):
    """The pivot budget was exhausted (resource guard, not a verdict)."""


@dataclass
class LPResult:
    status: str
    x: Optional[list[Fraction]] = None
    objective: Optional[Fraction] = None
    #: on INFEASIBLE: y with y.b > 0 and y.A_j <= 0 for all j
    farkas_dual: Optional[list[Fraction]] = None


def solve_equality_lp(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    cost: Sequence[Fraction],
    max_pivots: int = 100_000,
) -> LPResult:
    m = len(rows)
    nvars = len(cost)
    if any(len(r) != nvars for r in rows) or len(rhs) != m:
        raise ValueError("inconsistent LP dimensions")

    # sign-normalize so the right-hand side is nonnegative
    sigma = [1] * m
    tab: list[list[Fraction]] = []
    b: list[Fraction] = []
    for i in range(m):
        if rhs[i] < 0:
            sigma[i] = -1
            tab.append([-Fraction(v) for v in rows[i]])
            b.append(-Fraction(rhs[i]))
        else:
            tab.append([Fraction(v) for v in rows[i]])
            b.append(Fraction(rhs[i]))

    # append artificial identity columns
    for i in range(m):
        tab[i].extend(_ONE if j == i else _ZERO for j in range(m))
        tab[i].append(b[i])
    ncols = nvars + m
    basis = list(range(nvars, ncols))

    # phase 1: minimize the artificial sum
    zrow = [_ZERO] * (ncols + 1)
    for j in range(nvars, ncols):
        zrow[j] = _ONE
    for i in range(m):  # eliminate basic (artificial) columns from the cost row
        row = tab[i]
        for j in range(ncols + 1):
            zrow[j] -= row[j]
    for bi in basis:
        zrow[bi] = _ZERO

    budget = [max_pivots]
    _pivot_until_optimal(tab, zrow, basis, entering_limit=ncols, budget=budget)
    phase1 = -zrow[ncols]
    if phase1 > 0:
        # Farkas dual from the reduced costs of the artificial columns
        y = [sigma[i] * (_ONE - zrow[nvars + i]) for i in range(m)]
        return LPResult(INFEASIBLE, farkas_dual=y)

    # drive zero-level artificials out of the basis; drop redundant rows
    drop: list[int] = []
    for r in range(m):
        if basis[r] >= nvars:
            pivot_col = next((j for j in range(nvars) if tab[r][j] != 0), None)
            if pivot_col is None:
                drop.append(r)
            else:
                _pivot(tab, zrow, basis, r, pivot_col)
    for r in reversed(drop):
        del tab[r]
        del basis[r]
    m = len(tab)

    # phase 2 on the original columns only
    zrow = [_ZERO] * (ncols + 1)
    for j in range(nvars):
        zrow[j] = Fraction(cost[j])
    for i in range(m):
        cb = cost[basis[i]] if basis[i] < nvars else _ZERO
        if cb != 0:
            row = tab[i]
            for j in range(ncols + 1):
                zrow[j] -= cb * row[j]
    for bi in basis:
        if bi < nvars:
            zrow[bi] = _ZERO

    bounded = _pivot_until_optimal(tab, zrow, basis, entering_limit=nvars, budget=budget)
    if not bounded:
        return LPResult(UNBOUNDED)

    x = [_ZERO] * nvars
    for r in range(m):
        if basis[r] < nvars:
            x[basis[r]] = tab[r][ncols]
    return LPResult(OPTIMAL, x=x, objective=-zrow[ncols])


def _pivot_until_optimal(tab, zrow, basis, entering_limit: int, budget: list) -> bool:
    """Bland's rule; returns False when an unbounded direction is found."""
    m = len(tab)
    ncols = len(zrow) - 1
    while True:
        if budget[0] <= 0:
            raise PivotLimitError("LP pivot budget exhausted")
        budget[0] -= 1
        enter = next(
            (j for j in range(entering_limit) if zrow[j] < 0 and j not in basis),
            None,
        )
        if enter is None:
            return True
        leave = None
        best: Optional[Fraction] = None
        for r in range(m):
            a = tab[r][enter]
            if a > 0:
                ratio = tab[r][ncols] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best = ratio
                    leave = r
        if leave is None:
            return False
        _pivot(tab, zrow, basis, leave, enter)


def _pivot(tab, zrow, basis, r: int, j: int) -> None:
    ncols = len(zrow) - 1
    row = tab[r]
    pivot = row[j]
    if pivot == 0:
        raise ValueError("zero pivot")
    if pivot != 1:
        inv = _ONE / pivot
        tab[r] = row = [v * inv for v in row]
    for i in range(len(tab)):
        if i == r:
            continue
        factor = tab[i][j]
        if factor != 0:
            other = tab[i]
            tab[i] = [ov - factor * rv for ov, rv in zip(other, row)]
            tab[i][j] = _ZERO
    factor = zrow[j]
    if factor != 0:
        for c in range(ncols + 1):
            zrow[c] -= factor * row[c]
        zrow[j] = _ZERO
    basis[r] = j


# ---------------------------------------------------------------------------
# small builder for inequality systems over named nonnegative variables

LE, GE, EQ = "<=", ">=", "=="


class LinearProgramBuilder:
    """Named nonnegative variables with <=/>=/== constraints.

    Slack variables are added internally; solve() maps the optimum back to
    the variable names.
    """

    def __init__(self) -> None:
        self._vars: dict[object, int] = {}
        self._constraints: list[tuple[dict[int, Fraction], str, Fraction]] = []
        self._objective: dict[int, Fraction] = {}

    def variable(self, key) -> int:
        if key not in self._vars:
            self._vars[key] = len(self._vars)
        return self._vars[key]

    def add(self, coeffs: dict, sense: str, rhs: Fraction) -> None:
        if sense not in (LE, GE, EQ):
            raise ValueError(f"bad sense {sense!r}")
        indexed = {self.variable(k): Fraction(v) for k, v in coeffs.items() if v != 0}
        self._constraints.append((indexed, sense, Fraction(rhs)))

    def minimize(self, coeffs: dict) -> None:
        self._objective = {self.variable(k): Fraction(v) for k, v in coeffs.items()}

    def solve(self) -> tuple[str, Optional[dict], Optional[Fraction]]:
        nvars = len(self._vars)
        nslack = sum(1 for _, sense, _ in self._constraints if sense != EQ)
        total = nvars + nslack
        rows: list[list[Fraction]] = []
        rhs: list[Fraction] = []
        slack_at = nvars
        for coeffs, sense, b in self._constraints:
            row = [_ZERO] * total
            for idx, v in coeffs.items():
                row[idx] = v
            if sense == LE:
                row[slack_at] = _ONE
                slack_at += 1
            elif sense == GE:
                row[slack_at] = -_ONE
                slack_at += 1
            rows.append(row)
            rhs.append(b)
        cost = [_ZERO] * total
        for idx, v in self._objective.items():
            cost[idx] = v
        res = solve_equality_lp(rows, rhs, cost)
        if res.status != OPTIMAL:
            return res.status, None, None
        values = {key: res.x[idx] for key, idx in self._vars.items()}
        return OPTIMAL, values, res.objective
