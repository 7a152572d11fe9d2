"""Branch driver and model-search strategies for the bundled solver."""

from __future__ import annotations

import random
import time
from fractions import Fraction

from ..poly import CoeffPoly, Monomial, VarId
from .core import (BRANCH_DEPTH, Conflict, Constraint, PropState, as_row,
                   check_model, degree_in, dnf_branches, interval_refute,
                   propagate, relaxation_refute, sqrt_fraction, substitute)
from .reader import EQ, GE, GT, Problem
from .simplex import feasible_point


class Deadline:
    def __init__(self, seconds: float | None):
        self.at = time.monotonic() + seconds if seconds else None

    def expired(self) -> bool:
        return self.at is not None and time.monotonic() > self.at

    def remaining(self) -> float:
        if self.at is None:
            return 3600.0
        return max(0.0, self.at - time.monotonic())


def solve_problem(problem: Problem, timeout: float | None = None,
                  seed: int = 0) -> tuple[str, dict[VarId, Fraction] | None]:
    deadline = Deadline(timeout)
    rng = random.Random(seed)
    branches = dnf_branches(problem.assertions)
    if branches is None:
        return "unknown", None
    saw_unknown = False
    for branch in branches:
        status, model = solve_branch(branch, deadline, rng)
        if status == "sat":
            full = {v: model.get(v, Fraction(0)) for v in problem.variables}
            return "sat", full
        if status == "unknown":
            saw_unknown = True
        if deadline.expired():
            return "unknown", None
    return ("unknown" if saw_unknown else "unsat"), None


def solve_branch(constraints: list[Constraint], deadline: Deadline,
                 rng: random.Random, depth: int = 0,
                 ) -> tuple[str, dict[VarId, Fraction] | None]:
    original = list(constraints)
    state = PropState(list(constraints), [])
    try:
        propagate(state)
    except Conflict:
        return "unsat", None
    status, model = _solve_propagated(state, original, deadline, rng, depth)
    return status, model


def _complete_model(state: PropState, partial: dict[VarId, Fraction],
                    original: list[Constraint]) -> dict[VarId, Fraction] | None:
    model = dict(partial)
    for v, expr in reversed(state.eliminations):
        model[v] = expr.evaluate({w: model.get(w, Fraction(0))
                                  for w in expr.variables()})
    for _, poly in original:
        for v in poly.variables():
            model.setdefault(v, Fraction(0))
    return model if check_model(original, model) else None


def _solve_propagated(state: PropState, original: list[Constraint],
                      deadline: Deadline, rng: random.Random, depth: int,
                      ) -> tuple[str, dict[VarId, Fraction] | None]:
    constraints = state.constraints
    if not constraints:
        model = _complete_model(state, {}, original)
        return ("sat", model) if model is not None else ("unknown", None)
    max_degree = max(p.degree for _, p in constraints)
    if max_degree <= 1:
        point = feasible_point(
            [as_row(p) for rel, p in constraints if rel == EQ],
            [as_row(p) for rel, p in constraints if rel == GE],
            [as_row(p) for rel, p in constraints if rel == GT])
        if point is None:
            return "unsat", None
        model = _complete_model(state, point, original)
        return ("sat", model) if model is not None else ("unknown", None)

    # nonlinear: try exact refutations first, they are cheap and sound
    if interval_refute(constraints):
        return "unsat", None
    if relaxation_refute(constraints):
        return "unsat", None

    # branching rules: single-term products and disjunctive quadratics
    if depth < BRANCH_DEPTH:
        branched = _product_branches(constraints)
        if branched is not None:
            saw_unknown = False
            for sub in branched:
                status, model = solve_branch(sub, deadline, rng, depth + 1)
                if status == "sat":
                    model = _lift_through(state, model, original)
                    if model is not None:
                        return "sat", model
                    saw_unknown = True
                elif status == "unknown":
                    saw_unknown = True
                if deadline.expired():
                    return "unknown", None
            return ("unknown" if saw_unknown else "unsat"), None

    if state.algebraic:
        # some equality admits only irrational solutions in one variable
        return "unknown", None

    for search in (_probe_search, _alternation_search, _numeric_search):
        if deadline.expired():
            return "unknown", None
        partial = search(constraints, deadline, rng)
        if partial is not None and check_model(constraints, partial):
            model = _complete_model(state, partial, original)
            if model is not None:
                return "sat", model
    return "unknown", None


def _lift_through(state: PropState, model: dict[VarId, Fraction],
                  original: list[Constraint]):
    return _complete_model(state, model, original)


def _product_branches(constraints: list[Constraint]) -> list[list[Constraint]] | None:
    """Case split on a single-term equality c*m = 0: one branch per variable."""
    for index, (rel, poly) in enumerate(constraints):
        if rel != EQ or len(poly.terms) != 1:
            continue
        mono, _ = poly.terms[0]
        variables = mono.variables()
        if len(variables) < 2:
            continue
        rest = constraints[:index] + constraints[index + 1:]
        return [rest + [(EQ, CoeffPoly.var(v))] for v in variables]
    return None


def _probe_search(constraints: list[Constraint], deadline: Deadline,
                  rng: random.Random) -> dict[VarId, Fraction] | None:
    variables = sorted({v for _, p in constraints for v in p.variables()},
                       key=lambda v: v.sort_key())
    for value in (Fraction(0), Fraction(1), Fraction(1, 2)):
        candidate = {v: value for v in variables}
        if check_model(constraints, candidate):
            return candidate
    return None


def _bilinear_groups(constraints: list[Constraint]) -> tuple[set, set] | None:
    """Two-colour variables so every degree-two term crosses the groups."""
    adjacency: dict[VarId, set[VarId]] = {}
    for _, poly in constraints:
        for mono, _ in poly.terms:
            if mono.degree <= 1:
                continue
            if mono.degree > 2:
                return None
            variables = mono.variables()
            if len(variables) == 1:
                return None  # a square term cannot be split
            u, v = variables
            adjacency.setdefault(u, set()).add(v)
            adjacency.setdefault(v, set()).add(u)
    if not adjacency:
        return None
    color: dict[VarId, int] = {}
    for start in sorted(adjacency, key=lambda v: v.sort_key()):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            node = queue.pop()
            for nb in adjacency[node]:
                if nb not in color:
                    color[nb] = 1 - color[node]
                    queue.append(nb)
                elif color[nb] == color[node]:
                    return None
    group_a = {v for v, c in color.items() if c == 0}
    group_b = {v for v, c in color.items() if c == 1}
    return group_a, group_b


def _linear_solve_given(constraints: list[Constraint],
                        fixed: dict[VarId, Fraction]):
    eqs, ges, gts = [], [], []
    for rel, poly in constraints:
        reduced = substitute(poly, fixed)
        if reduced.degree > 1:
            return None
        row = as_row(reduced)
        (eqs if rel == EQ else ges if rel == GE else gts).append(row)
    return feasible_point(eqs, ges, gts)


def _alternation_search(constraints: list[Constraint], deadline: Deadline,
                        rng: random.Random) -> dict[VarId, Fraction] | None:
    groups = _bilinear_groups(constraints)
    if groups is None:
        return None
    group_a, group_b = groups
    variables = {v for _, p in constraints for v in p.variables()}
    inits: list[Fraction] = [Fraction(1), Fraction(0), Fraction(1, 2), Fraction(2)]
    for init in inits:
        if deadline.expired():
            return None
        fixed = {v: init for v in group_a}
        for _ in range(8):
            point_b = _linear_solve_given(constraints, fixed)
            if point_b is None:
                break
            candidate = dict(fixed)
            candidate.update({v: point_b.get(v, Fraction(0))
                              for v in variables if v not in fixed})
            if check_model(constraints, candidate):
                return candidate
            fixed_b = {v: candidate[v] for v in group_b}
            point_a = _linear_solve_given(constraints, fixed_b)
            if point_a is None:
                break
            fixed = {v: point_a.get(v, Fraction(0)) for v in group_a}
            candidate = dict(fixed_b)
            candidate.update(fixed)
            for v in variables:
                candidate.setdefault(v, Fraction(0))
            if check_model(constraints, candidate):
                return candidate
    return None


# ---------------------------------------------------------------------------
# numeric search with exact rounding


def _float_eval(poly: CoeffPoly, values: dict[VarId, float]) -> float:
    total = 0.0
    for mono, coeff in poly.terms:
        term = float(coeff)
        for v, e in mono.powers:
            term *= values[v] ** e
        total += term
    return total


def _numeric_search(constraints: list[Constraint], deadline: Deadline,
                    rng: random.Random) -> dict[VarId, Fraction] | None:
    try:
        import numpy as np
        from scipy.optimize import least_squares
    except ImportError:  # pragma: no cover
        return None
    variables = sorted({v for _, p in constraints for v in p.variables()},
                       key=lambda v: v.sort_key())
    n = len(variables)
    margin = 1e-4

    def residuals(x):
        env = {v: float(x[i]) for i, v in enumerate(variables)}
        out = []
        for rel, poly in constraints:
            value = _float_eval(poly, env)
            if rel == EQ:
                out.append(value)
            elif rel == GE:
                out.append(min(value, 0.0))
            else:
                out.append(min(value - margin, 0.0))
        return out

    method = "lm" if len(constraints) >= n else "trf"
    starts = [np.zeros(n), np.ones(n), np.full(n, 0.5), -np.ones(n)]
    for k in range(12):
        starts.append(np.array([rng.gauss(0, 1 + k // 4) for _ in range(n)]))
    for x0 in starts:
        if deadline.expired():
            return None
        try:
            fit = least_squares(residuals, x0, method=method, max_nfev=400)
        except Exception:  # pragma: no cover
            continue
        if len(fit.fun) and np.max(np.abs(fit.fun)) > 1e-9:
            continue
        numeric = {v: float(fit.x[i]) for i, v in enumerate(variables)}
        model = _round_exactly(constraints, numeric, deadline)
        if model is not None:
            return model
    return None


_DENOMINATORS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 128, 256, 1024, 4096)


def _simple_candidates(x: float) -> list[Fraction]:
    out = []
    seen = set()
    for d in _DENOMINATORS:
        q = Fraction(round(x * d), d)
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out[:6]


def _round_exactly(constraints: list[Constraint], numeric: dict[VarId, float],
                   deadline: Deadline) -> dict[VarId, Fraction] | None:
    """Round variables one at a time, propagating exactly after each pick."""
    state = PropState(list(constraints), [])
    try:
        propagate(state, numeric)
    except Conflict:
        return None
    while True:
        if deadline.expired():
            return None
        live = sorted({v for _, p in state.constraints for v in p.variables()},
                      key=lambda v: v.sort_key())
        if not live:
            return _finish_rounding(state, constraints)
        if max(p.degree for _, p in state.constraints) <= 1:
            return _finish_rounding(state, constraints)
        # choose the variable whose numeric value is closest to a simple
        # rational, preferring ones that occur nonlinearly
        def score(v):
            x = numeric.get(v, 0.0)
            q = _simple_candidates(x)[0]
            nonlinear = any(degree_in(p, v) > 1 for _, p in state.constraints)
            return (0 if nonlinear else 1, abs(float(q) - x), q.denominator)

        target = min(live, key=lambda v: (score(v), v.sort_key()))
        assigned = False
        for candidate in _simple_candidates(numeric.get(target, 0.0)):
            trial = PropState(list(state.constraints), list(state.eliminations))
            trial.algebraic = state.algebraic
            trial.assign(target, candidate)
            try:
                propagate(trial, numeric)
            except Conflict:
                continue
            state = trial
            assigned = True
            break
        if not assigned:
            return None


def _finish_rounding(state: PropState, constraints: list[Constraint]):
    if state.constraints:
        if max(p.degree for _, p in state.constraints) > 1:
            return None
        point = feasible_point(
            [as_row(p) for rel, p in state.constraints if rel == EQ],
            [as_row(p) for rel, p in state.constraints if rel == GE],
            [as_row(p) for rel, p in state.constraints if rel == GT])
        if point is None:
            return None
    else:
        point = {}
    model = dict(point)
    for v, expr in reversed(state.eliminations):
        model[v] = expr.evaluate({w: model.get(w, Fraction(0))
                                  for w in expr.variables()})
    for _, poly in constraints:
        for v in poly.variables():
            model.setdefault(v, Fraction(0))
    return model if check_model(constraints, model) else None
