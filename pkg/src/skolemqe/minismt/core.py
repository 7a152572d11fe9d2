"""Constraint solving for quantifier-free real arithmetic.

The solver is sound by construction and incomplete by design:

* ``sat`` is reported only with an explicit rational model that has been
  re-checked exactly against every constraint;
* ``unsat`` is reported only through exact refutations: ground evaluation,
  rational simplex infeasibility, interval contraction to emptiness, or an
  infeasible linear relaxation over monomial variables extended with
  products of the branch's nonnegative polynomials (all of which are valid
  consequences);
* anything else is ``unknown``.

Nonlinear model search layers exact propagation (Gaussian elimination,
forced zeros of sums of even powers, rational roots of univariate
quadratics), alternating exact linear solves over a bilinear variable
split, and a numeric least-squares stage whose output is rounded variable
by variable with exact propagation after every assignment.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import isqrt

from ..poly import CoeffPoly, Monomial, VarId
from .reader import EQ, GE, GT, NE, Node, Problem
from .simplex import feasible_point

Constraint = tuple[str, CoeffPoly]

DNF_BUDGET = 2048
BRANCH_DEPTH = 16

INF = float("inf")


# ---------------------------------------------------------------------------
# polynomial helpers


def substitute(poly: CoeffPoly, assignment: dict[VarId, Fraction]) -> CoeffPoly:
    if not assignment:
        return poly
    acc: dict[Monomial, Fraction] = {}
    for mono, coeff in poly.terms:
        kept: dict[VarId, int] = {}
        value = coeff
        for v, e in mono.powers:
            if v in assignment:
                value *= assignment[v] ** e
            else:
                kept[v] = e
        if value == 0:
            continue
        m = Monomial.from_dict(kept)
        acc[m] = acc.get(m, Fraction(0)) + value
    return CoeffPoly.from_dict(acc)


def degree_in(poly: CoeffPoly, v: VarId) -> int:
    return max((m.exponent(v) for m, _ in poly.terms), default=0)


def linear_split(poly: CoeffPoly, v: VarId) -> tuple[Fraction, CoeffPoly] | None:
    """Write poly as c*v + rest with constant c != 0 and rest free of v."""
    c = Fraction(0)
    rest: dict[Monomial, Fraction] = {}
    for mono, coeff in poly.terms:
        e = mono.exponent(v)
        if e == 0:
            rest[mono] = coeff
        elif e == 1 and len(mono.powers) == 1:
            c += coeff
        else:
            return None
    if c == 0:
        return None
    return c, CoeffPoly.from_dict(rest)


def as_row(poly: CoeffPoly):
    """A degree-one polynomial as (coeffs, const) for the simplex."""
    coeffs: dict[VarId, Fraction] = {}
    const = Fraction(0)
    for mono, coeff in poly.terms:
        if mono.is_one():
            const += coeff
        else:
            (v, e), = mono.powers
            assert e == 1
            coeffs[v] = coeffs.get(v, Fraction(0)) + coeff
    return coeffs, const


def check_model(constraints: list[Constraint], model: dict[VarId, Fraction]) -> bool:
    for rel, poly in constraints:
        value = poly.evaluate(model)
        if rel == EQ and value != 0:
            return False
        if rel == GE and value < 0:
            return False
        if rel == GT and value <= 0:
            return False
    return True


def sqrt_fraction(q: Fraction) -> Fraction | None:
    """Exact square root when q is a square of a rational."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def sqrt_upper(q: Fraction) -> Fraction:
    """A rational upper bound for sqrt(q), q >= 0."""
    num, den = q.numerator, q.denominator
    s = isqrt(num * den)
    if s * s < num * den:
        s += 1
    return Fraction(s, den)


# ---------------------------------------------------------------------------
# DNF expansion


def dnf_branches(assertions: list[Node]) -> list[list[Constraint]] | None:
    branches: list[list[Constraint]] = [[]]
    for node in assertions:
        expanded = _dnf(node)
        if expanded is None:
            return None
        branches = [b + e for b in branches for e in expanded]
        if len(branches) > DNF_BUDGET:
            return None
    return branches


def _dnf(node: Node) -> list[list[Constraint]] | None:
    if node.kind == "true":
        return [[]]
    if node.kind == "false":
        return []
    if node.kind == "atom":
        rel, poly = node.atom
        if rel == NE:
            return [[(GT, poly)], [(GT, poly.neg())]]
        return [[(rel, poly)]]
    if node.kind == "and":
        branches: list[list[Constraint]] = [[]]
        for child in node.children:
            sub = _dnf(child)
            if sub is None:
                return None
            branches = [b + s for b in branches for s in sub]
            if len(branches) > DNF_BUDGET:
                return None
        return branches
    out: list[list[Constraint]] = []
    for child in node.children:
        sub = _dnf(child)
        if sub is None:
            return None
        out.extend(sub)
        if len(out) > DNF_BUDGET:
            return None
    return out


# ---------------------------------------------------------------------------
# exact propagation


class Conflict(Exception):
    pass


@dataclass
class PropState:
    constraints: list[Constraint]
    eliminations: list[tuple[VarId, CoeffPoly]]
    algebraic: bool = False  # an equality forces an irrational value

    def assign(self, v: VarId, value: Fraction):
        self.eliminate(v, CoeffPoly.const(value))

    def eliminate(self, v: VarId, expr: CoeffPoly):
        self.eliminations.append((v, expr))
        updated = []
        for rel, poly in self.constraints:
            if degree_in(poly, v) == 0:
                updated.append((rel, poly))
                continue
            updated.append((rel, _substitute_var(poly, v, expr)))
        self.constraints = updated


def _substitute_var(poly: CoeffPoly, v: VarId, expr: CoeffPoly) -> CoeffPoly:
    total = CoeffPoly.zero()
    for mono, coeff in poly.terms:
        e = mono.exponent(v)
        base = CoeffPoly.from_dict(
            {Monomial.from_dict({w: k for w, k in mono.powers if w != v}): coeff})
        if e:
            power = CoeffPoly.const(1)
            for _ in range(e):
                power = power.mul(expr)
            base = base.mul(power)
        total = total.add(base)
    return total


def _ground_check(rel: str, value: Fraction):
    if rel == EQ and value != 0:
        raise Conflict()
    if rel == GE and value < 0:
        raise Conflict()
    if rel == GT and value <= 0:
        raise Conflict()


def propagate(state: PropState, numeric_hint: dict[VarId, float] | None = None) -> bool:
    """Apply exhaustive non-branching rules; True when anything changed.

    Raises Conflict on an exact contradiction.
    """
    changed = False
    progress = True
    while progress:
        progress = False
        kept: list[Constraint] = []
        for rel, poly in state.constraints:
            if not poly.variables():
                _ground_check(rel, poly.const_value())
                progress = True
                continue
            kept.append((rel, poly))
        state.constraints = kept
        # forced zeros: an equality whose terms are all same-sign even powers
        for rel, poly in list(state.constraints):
            if rel != EQ:
                continue
            forced = _even_power_zeros(poly)
            if forced is None:
                continue
            if forced == "conflict":
                raise Conflict()
            if forced:
                for v in forced:
                    state.assign(v, Fraction(0))
                progress = changed = True
                break
        if progress:
            continue
        # Gaussian elimination on a variable with constant linear coefficient
        for index, (rel, poly) in enumerate(state.constraints):
            if rel != EQ:
                continue
            candidates = sorted(poly.variables(), key=lambda v: v.sort_key())
            chosen = None
            for v in candidates:
                split = linear_split(poly, v)
                if split is None:
                    continue
                c, rest = split
                blowup = any(degree_in(q, v) > 1 for _, q in state.constraints)
                if blowup and len(rest.terms) > 4:
                    continue
                chosen = (v, rest.scale(Fraction(-1) / c))
                break
            if chosen is not None:
                del state.constraints[index]
                state.eliminate(*chosen)
                progress = changed = True
                break
        if progress:
            continue
        # univariate quadratic equalities with rational roots
        for index, (rel, poly) in enumerate(state.constraints):
            if rel != EQ:
                continue
            variables = poly.variables()
            if len(variables) != 1:
                continue
            (v,) = variables
            c2 = c1 = c0 = Fraction(0)
            ok = True
            for mono, coeff in poly.terms:
                e = mono.exponent(v)
                if e == 0:
                    c0 += coeff
                elif e == 1:
                    c1 += coeff
                elif e == 2:
                    c2 += coeff
                else:
                    ok = False
            if not ok or c2 == 0:
                continue
            disc = c1 * c1 - 4 * c2 * c0
            if disc < 0:
                raise Conflict()
            root = sqrt_fraction(disc)
            if root is None:
                state.algebraic = True
                continue
            r1 = (-c1 + root) / (2 * c2)
            r2 = (-c1 - root) / (2 * c2)
            value = r1
            if numeric_hint and v in numeric_hint:
                value = min((r1, r2), key=lambda r: abs(float(r) - numeric_hint[v]))
            elif r1 != r2:
                # prefer the root that keeps things simple
                value = min((r1, r2), key=lambda r: (abs(r.denominator), abs(r.numerator)))
            del state.constraints[index]
            state.assign(v, value)
            progress = changed = True
            break
    return changed


def _even_power_zeros(poly: CoeffPoly):
    """Variables forced to zero by ``sum of same-sign even powers = 0``."""
    sign = 0
    const = Fraction(0)
    forced: set[VarId] = set()
    for mono, coeff in poly.terms:
        if mono.is_one():
            const = coeff
            continue
        if any(e % 2 for _, e in mono.powers):
            return None
        if len(mono.powers) != 1:
            return None
        s = 1 if coeff > 0 else -1
        if sign and s != sign:
            return None
        sign = s
        forced.add(mono.powers[0][0])
    if sign == 0:
        return None
    if const != 0 and (const > 0) == (sign > 0):
        return "conflict"  # positive sum equated to zero
    if const != 0:
        return None
    return forced


# ---------------------------------------------------------------------------
# refutations


def interval_refute(constraints: list[Constraint], passes: int = 12) -> bool:
    """True when interval contraction proves the conjunction empty."""
    box: dict[VarId, list] = {}
    for _, poly in constraints:
        for v in poly.variables():
            box.setdefault(v, [-INF, INF])
    try:
        for _ in range(passes):
            changed = False
            for rel, poly in constraints:
                lo, hi = _bound(poly, box)
                if rel == GE and hi < 0:
                    return True
                if rel == GT and hi <= 0:
                    return True
                if rel == EQ and (hi < 0 or lo > 0):
                    return True
                changed |= _contract(rel, poly, box)
            for lo, hi in box.values():
                if lo > hi:
                    return True
            if not changed:
                break
    except Conflict:
        return True
    return False


def _bound(poly: CoeffPoly, box) -> tuple:
    lo = hi = Fraction(0)
    for mono, coeff in poly.terms:
        tlo, thi = _mono_bound(mono, box)
        clo, chi = _scale_interval(coeff, tlo, thi)
        lo, hi = lo + clo, hi + chi
    return lo, hi


def _mono_bound(mono: Monomial, box) -> tuple:
    lo, hi = Fraction(1), Fraction(1)
    for v, e in mono.powers:
        vlo, vhi = box[v]
        plo, phi = _power_interval(vlo, vhi, e)
        lo, hi = _mul_intervals(lo, hi, plo, phi)
    return lo, hi


def _power_interval(lo, hi, e: int) -> tuple:
    if e == 1:
        return lo, hi
    if e % 2 == 1:
        return _pow_val(lo, e), _pow_val(hi, e)
    # even power
    if lo >= 0:
        return _pow_val(lo, e), _pow_val(hi, e)
    if hi <= 0:
        return _pow_val(hi, e), _pow_val(lo, e)
    top = max(_pow_val(lo, e), _pow_val(hi, e))
    return Fraction(0), top


def _pow_val(x, e: int):
    if x == INF:
        return INF
    if x == -INF:
        return -INF if e % 2 else INF
    return x ** e


def _scale_interval(c: Fraction, lo, hi) -> tuple:
    if c == 0:
        return Fraction(0), Fraction(0)
    a = _mul_scalar(c, lo)
    b = _mul_scalar(c, hi)
    return (a, b) if c > 0 else (b, a)


def _mul_scalar(c: Fraction, x):
    if x == INF:
        return INF if c > 0 else -INF
    if x == -INF:
        return -INF if c > 0 else INF
    return c * x


def _mul_intervals(alo, ahi, blo, bhi) -> tuple:
    candidates = []
    for a in (alo, ahi):
        for b in (blo, bhi):
            candidates.append(_mul_ext(a, b))
    return min(candidates), max(candidates)


def _mul_ext(a, b):
    if a == 0 or b == 0:
        return Fraction(0)
    if a in (INF, -INF) or b in (INF, -INF):
        positive = ((a > 0) == (b > 0))
        return INF if positive else -INF
    return a * b


def _contract(rel: str, poly: CoeffPoly, box) -> bool:
    changed = False
    for v in poly.variables():
        # linear isolation: poly = c*v + rest
        split = linear_split(poly, v)
        if split is not None:
            c, rest = split
            rlo, rhi = _bound(rest, box)
            if rel in (GE, GT, EQ):
                # c*v >= -rest >= -rhi
                if rhi != INF:
                    bound_value = _mul_scalar(Fraction(-1, 1), rhi) / c
                    changed |= _tighten(box[v], bound_value, lower=(c > 0))
            if rel == EQ and rlo != -INF:
                bound_value = _mul_scalar(Fraction(-1, 1), rlo) / c
                changed |= _tighten(box[v], bound_value, lower=(c < 0))
            continue
        # even-power isolation: poly = c*v^(2k) + rest with c < 0
        c, k, rest = _even_term_split(poly, v)
        if c is None:
            continue
        rlo, rhi = _bound(rest, box)
        if rel in (GE, GT):
            if rhi == INF:
                continue
            limit = rhi / -c
            if limit < 0:
                raise Conflict()
            radius = sqrt_upper(limit)
            for _ in range(k - 1):
                radius = sqrt_upper(radius)
            changed |= _tighten(box[v], radius, lower=False)
            changed |= _tighten(box[v], -radius, lower=True)
    return changed


def _even_term_split(poly: CoeffPoly, v: VarId):
    c = None
    k = 0
    rest: dict[Monomial, Fraction] = {}
    for mono, coeff in poly.terms:
        e = mono.exponent(v)
        if e == 0:
            rest[mono] = coeff
        elif len(mono.powers) == 1 and e % 2 == 0:
            if c is not None:
                return None, 0, None
            c, k = coeff, e // 2
        else:
            return None, 0, None
    if c is None or c >= 0:
        return None, 0, None
    return c, k, CoeffPoly.from_dict(rest)


def _tighten(interval: list, value, lower: bool) -> bool:
    if lower:
        if value > interval[0]:
            interval[0] = value
            return True
    else:
        if value < interval[1]:
            interval[1] = value
            return True
    return False


def relaxation_refute(constraints: list[Constraint], max_degree: int = 6,
                      max_rows: int = 600) -> bool:
    """Linear relaxation over monomials, strengthened with products of the
    nonnegative constraint polynomials and with even-monomial rows.  An
    infeasible relaxation refutes the branch exactly."""
    eqs = [poly for rel, poly in constraints if rel == EQ]
    ges = [(poly, False) for rel, poly in constraints if rel == GE]
    ges += [(poly, True) for rel, poly in constraints if rel == GT]
    derived: list[tuple[CoeffPoly, bool]] = list(ges)
    for (p, sp), (q, sq) in combinations_with_replacement(ges, 2):
        if p.degree + q.degree <= max_degree and len(derived) < max_rows:
            derived.append((p.mul(q), sp and sq))
    monomials: set[Monomial] = set()
    for poly in eqs:
        monomials.update(m for m, _ in poly.terms)
    for poly, _ in derived:
        monomials.update(m for m, _ in poly.terms)
    even_rows = [CoeffPoly.from_dict({m: Fraction(1)})
                 for m in monomials
                 if not m.is_one() and all(e % 2 == 0 for _, e in m.powers)]

    def linearize(poly: CoeffPoly):
        coeffs: dict[Monomial, Fraction] = {}
        const = Fraction(0)
        for mono, coeff in poly.terms:
            if mono.is_one():
                const += coeff
            else:
                coeffs[mono] = coeffs.get(mono, Fraction(0)) + coeff
        return coeffs, const

    eq_rows = [linearize(p) for p in eqs]
    ge_rows = [linearize(p) for p, s in derived if not s]
    ge_rows += [linearize(p) for p in even_rows]
    gt_rows = [linearize(p) for p, s in derived if s]
    return feasible_point(eq_rows, ge_rows, gt_rows) is None
