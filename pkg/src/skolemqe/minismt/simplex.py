"""Two-phase exact rational simplex with Bland's rule.

Rows are linear expressions over free (sign-unrestricted) variables; the
solver internally splits each variable into a difference of nonnegative
parts, adds slack columns for inequality rows and artificial columns for
phase one.  Everything is computed with Fractions, so feasibility answers
and basic solutions are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

Row = tuple[Mapping[Hashable, Fraction], Fraction]  # sum(coeffs) + const


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    assignment: dict[Hashable, Fraction]
    objective: Fraction


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int):
    pivot_row = tableau[row]
    factor = pivot_row[col]
    tableau[row] = [v / factor for v in pivot_row]
    pivot_row = tableau[row]
    for i, other in enumerate(tableau):
        if i != row and other[col] != 0:
            scale = other[col]
            tableau[i] = [a - scale * b for a, b in zip(other, pivot_row)]
    basis[row] = col


def _run_simplex(tableau: list[list[Fraction]], basis: list[int],
                 cost: list[Fraction]) -> str:
    """Minimise ``cost`` over the tableau in place; cost row included last."""
    ncols = len(tableau[0]) - 1 if tableau else len(cost) - 1
    while True:
        enter = None
        for j in range(ncols):
            if cost[j] < 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        leave = None
        best: Fraction | None = None
        for i, row in enumerate(tableau):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best or (ratio == best
                                                    and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded"
        _pivot(tableau, basis, leave, enter)
        scale = cost[enter]
        if scale != 0:
            cost[:] = [a - scale * b for a, b in zip(cost, tableau[leave])]


def solve_lp(equalities: Sequence[Row], inequalities: Sequence[Row],
             objective: Row | None = None, maximize: bool = False) -> LPResult:
    """Solve over free variables: equalities hold, inequalities are >= 0.

    Returns an exact basic solution; with no objective this is a pure
    feasibility check.
    """
    variables: list[Hashable] = []
    seen = set()
    for coeffs, _ in list(equalities) + list(inequalities) + ([objective] if objective else []):
        for v in coeffs:
            if v not in seen:
                seen.add(v)
                variables.append(v)
    var_index = {v: i for i, v in enumerate(variables)}
    nvars = len(variables)
    nineq = len(inequalities)
    # columns: v+ (nvars), v- (nvars), slacks (nineq), artificials (added later)
    base_cols = 2 * nvars + nineq
    rows: list[list[Fraction]] = []
    for coeffs, const in equalities:
        row = [Fraction(0)] * (base_cols + 1)
        for v, a in coeffs.items():
            row[var_index[v]] += a
            row[nvars + var_index[v]] -= a
        row[-1] = -const
        rows.append(row)
    for k, (coeffs, const) in enumerate(inequalities):
        row = [Fraction(0)] * (base_cols + 1)
        for v, a in coeffs.items():
            row[var_index[v]] += a
            row[nvars + var_index[v]] -= a
        row[2 * nvars + k] = Fraction(-1)  # surplus: expr - s = 0, s >= 0
        row[-1] = -const
        rows.append(row)
    # make right-hand sides nonnegative
    for row in rows:
        if row[-1] < 0:
            for j in range(len(row)):
                row[j] = -row[j]
    m = len(rows)
    total_cols = base_cols + m
    tableau = []
    basis = []
    for i, row in enumerate(rows):
        full = row[:-1] + [Fraction(0)] * m + [row[-1]]
        full[base_cols + i] = Fraction(1)
        tableau.append(full)
        basis.append(base_cols + i)
    # phase one: minimise the sum of artificials
    cost = [Fraction(0)] * (total_cols + 1)
    for j in range(base_cols, total_cols):
        cost[j] = Fraction(1)
    for i in range(m):
        cost = [a - b for a, b in zip(cost, tableau[i])]
    status = _run_simplex(tableau, basis, cost)
    assert status == "optimal"  # bounded below by zero
    if -cost[-1] != 0:
        return LPResult("infeasible", {}, Fraction(0))
    # drive remaining artificials out of the basis
    i = 0
    while i < len(tableau):
        if basis[i] >= base_cols:
            pivot_col = None
            for j in range(base_cols):
                if tableau[i][j] != 0:
                    pivot_col = j
                    break
            if pivot_col is None:
                del tableau[i]
                del basis[i]
                continue
            _pivot(tableau, basis, i, pivot_col)
        i += 1
    # drop artificial columns
    for i in range(len(tableau)):
        tableau[i] = tableau[i][:base_cols] + [tableau[i][-1]]
    if objective is None:
        assignment = _extract(tableau, basis, variables, nvars)
        return LPResult("optimal", assignment, Fraction(0))
    sign = Fraction(-1) if maximize else Fraction(1)
    cost = [Fraction(0)] * (base_cols + 1)
    coeffs, const = objective
    for v, a in coeffs.items():
        cost[var_index[v]] += sign * a
        cost[nvars + var_index[v]] -= sign * a
    for i in range(len(tableau)):
        scale = cost[basis[i]]
        if scale != 0:
            cost = [a - scale * b for a, b in zip(cost, tableau[i])]
    status = _run_simplex(tableau, basis, cost)
    if status == "unbounded":
        return LPResult("unbounded", {}, Fraction(0))
    assignment = _extract(tableau, basis, variables, nvars)
    value = const
    for v, a in coeffs.items():
        value += a * assignment.get(v, Fraction(0))
    return LPResult("optimal", assignment, value)


def _extract(tableau, basis, variables, nvars) -> dict[Hashable, Fraction]:
    values = {}
    for i, b in enumerate(basis):
        values[b] = tableau[i][-1]
    out = {}
    for idx, v in enumerate(variables):
        out[v] = values.get(idx, Fraction(0)) - values.get(nvars + idx, Fraction(0))
    return out


def feasible_point(equalities: Sequence[Row], nonstrict: Sequence[Row],
                   strict: Sequence[Row]) -> dict[Hashable, Fraction] | None:
    """An exact point satisfying all rows, or None when none exists.

    Strict rows are handled by maximising a common slack bounded by one; a
    maximal slack of zero over the closed relaxation proves there is no
    strictly feasible point.
    """
    if not strict:
        result = solve_lp(equalities, nonstrict)
        return result.assignment if result.status == "optimal" else None
    t = ("__slack__",)
    ineqs = list(nonstrict)
    for coeffs, const in strict:
        with_t = dict(coeffs)
        with_t[t] = with_t.get(t, Fraction(0)) - 1
        ineqs.append((with_t, const))
    ineqs.append(({t: Fraction(-1)}, Fraction(1)))  # t <= 1
    ineqs.append(({t: Fraction(1)}, Fraction(0)))   # t >= 0
    result = solve_lp(equalities, ineqs, objective=({t: Fraction(1)}, Fraction(0)),
                      maximize=True)
    if result.status != "optimal" or result.objective <= 0:
        return None
    out = dict(result.assignment)
    out.pop(t, None)
    return out
