"""Exact sparse multivariate polynomial arithmetic over the rationals.

Two kinds of variables coexist: *program* variables (the quantified
variables of a formula) and *unknown* variables (template coefficients,
certificate multipliers, factor entries).  A :class:`TemplatePolynomial`
is a polynomial in program variables whose coefficients are themselves
exact-rational polynomials in unknown variables (:class:`CoeffPoly`).

All values are immutable and hashable; all operations are pure.  Monomials
are ordered graded-lexicographically, with ties broken by a natural-order
comparison of variable names (digit runs compare numerically), so that
``x2 < x10`` and ``c_1_2 < c_1_10``.  Every container stores its terms
sorted in that order with no zero entries, which makes structural equality
coincide with mathematical equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import UnboundVariable

Rat = Fraction

_NAT_SPLIT = re.compile(r"(\d+)")


def natural_key(name: str) -> tuple:
    """Sort key treating digit runs as numbers: x2 before x10."""
    parts = _NAT_SPLIT.split(name)
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in parts if p != "")


class VarKind(Enum):
    PROGRAM = "program"
    UNKNOWN = "unknown"


@dataclass(frozen=True, order=False)
class VarId:
    """A named variable.  Names are unique within a kind."""

    name: str
    kind: VarKind

    def sort_key(self) -> tuple:
        return (self.kind.value, natural_key(self.name))

    def __lt__(self, other: "VarId") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        tag = "p" if self.kind is VarKind.PROGRAM else "u"
        return f"{self.name}:{tag}"


def program_var(name: str) -> VarId:
    return VarId(name, VarKind.PROGRAM)


def unknown_var(name: str) -> VarId:
    return VarId(name, VarKind.UNKNOWN)


@dataclass(frozen=True)
class Monomial:
    """A power product of variables; the empty product is the monomial 1.

    Exponents are stored as a tuple of (variable, positive exponent) pairs
    sorted by variable, so equal monomials are structurally equal.
    """

    powers: tuple[tuple[VarId, int], ...] = ()

    @staticmethod
    def one() -> "Monomial":
        return _ONE_MONOMIAL

    @staticmethod
    def of(var: VarId, exp: int = 1) -> "Monomial":
        if exp == 0:
            return _ONE_MONOMIAL
        if exp < 0:
            raise ValueError("negative exponent")
        return Monomial(((var, exp),))

    @staticmethod
    def from_dict(exps: Mapping[VarId, int]) -> "Monomial":
        items = tuple(sorted(((v, e) for v, e in exps.items() if e != 0),
                             key=lambda it: it[0].sort_key()))
        for _, e in items:
            if e < 0:
                raise ValueError("negative exponent")
        return Monomial(items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.powers)

    def is_one(self) -> bool:
        return not self.powers

    def exponent(self, var: VarId) -> int:
        for v, e in self.powers:
            if v == var:
                return e
        return 0

    def variables(self) -> tuple[VarId, ...]:
        return tuple(v for v, _ in self.powers)

    def mul(self, other: "Monomial") -> "Monomial":
        exps: dict[VarId, int] = dict(self.powers)
        for v, e in other.powers:
            exps[v] = exps.get(v, 0) + e
        return Monomial.from_dict(exps)

    def evaluate(self, point: Mapping[VarId, RatLike]) -> RatLike:
        value: RatLike = Fraction(1)
        for v, e in self.powers:
            if v not in point:
                raise UnboundVariable(f"variable {v.name} not bound")
            value = value * point[v] ** e
        return value

    def sort_key(self):
        # Graded order: lower total degree first; within a degree the
        # monomial with the higher exponent on the earliest variable
        # comes first (so x1^2 precedes x1*x2 precedes x2^2).
        return (self.degree, tuple((v.sort_key(), -e) for v, e in self.powers))

    def __lt__(self, other: "Monomial") -> bool:
        if self.degree != other.degree:
            return self.degree < other.degree
        merged = sorted(set(self.variables()) | set(other.variables()),
                        key=lambda v: v.sort_key())
        for v in merged:
            a, b = -self.exponent(v), -other.exponent(v)
            if a != b:
                return a < b
        return False

    def __le__(self, other: "Monomial") -> bool:
        return self == other or self < other

    def __str__(self) -> str:
        if not self.powers:
            return "1"
        return "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in self.powers)


_ONE_MONOMIAL = Monomial()

RatLike = Fraction  # points may in principle carry any exact numeric; kept as Fraction


def _as_rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def _sorted_terms(acc: dict[Monomial, Fraction]) -> tuple[tuple[Monomial, Fraction], ...]:
    return tuple(sorted(((m, c) for m, c in acc.items() if c != 0),
                        key=lambda it: it[0].sort_key()))


@dataclass(frozen=True)
class CoeffPoly:
    """A polynomial over unknown variables with exact rational coefficients."""

    terms: tuple[tuple[Monomial, Fraction], ...] = ()

    @staticmethod
    def zero() -> "CoeffPoly":
        return _ZERO_COEFF

    @staticmethod
    def const(value) -> "CoeffPoly":
        q = _as_rat(value)
        if q == 0:
            return _ZERO_COEFF
        return CoeffPoly(((Monomial.one(), q),))

    @staticmethod
    def var(v: VarId) -> "CoeffPoly":
        if v.kind is not VarKind.UNKNOWN:
            raise ValueError(f"{v.name} is not an unknown variable")
        return CoeffPoly(((Monomial.of(v), Fraction(1)),))

    @staticmethod
    def from_dict(terms: Mapping[Monomial, Fraction]) -> "CoeffPoly":
        return CoeffPoly(_sorted_terms({m: _as_rat(c) for m, c in terms.items()}))

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(m.is_one() for m, _ in self.terms)

    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return self.terms[0][1]

    @property
    def degree(self) -> int:
        return max((m.degree for m, _ in self.terms), default=0)

    def coefficient(self, m: Monomial) -> Fraction:
        for mono, c in self.terms:
            if mono == m:
                return c
        return Fraction(0)

    def variables(self) -> set[VarId]:
        out: set[VarId] = set()
        for m, _ in self.terms:
            out.update(m.variables())
        return out

    def add(self, other: "CoeffPoly") -> "CoeffPoly":
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, Fraction(0)) + c
        return CoeffPoly(_sorted_terms(acc))

    def neg(self) -> "CoeffPoly":
        return CoeffPoly(tuple((m, -c) for m, c in self.terms))

    def sub(self, other: "CoeffPoly") -> "CoeffPoly":
        return self.add(other.neg())

    def mul(self, other: "CoeffPoly") -> "CoeffPoly":
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = m1.mul(m2)
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return CoeffPoly(_sorted_terms(acc))

    def scale(self, k) -> "CoeffPoly":
        q = _as_rat(k)
        if q == 0:
            return _ZERO_COEFF
        return CoeffPoly(tuple((m, c * q) for m, c in self.terms))

    def evaluate(self, point: Mapping[VarId, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms:
            total += c * m.evaluate(point)
        return total

    def __add__(self, other: "CoeffPoly") -> "CoeffPoly":
        return self.add(other)

    def __sub__(self, other: "CoeffPoly") -> "CoeffPoly":
        return self.sub(other)

    def __mul__(self, other: "CoeffPoly") -> "CoeffPoly":
        return self.mul(other)

    def __neg__(self) -> "CoeffPoly":
        return self.neg()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            if m.is_one():
                parts.append(str(c))
            elif c == 1:
                parts.append(str(m))
            elif c == -1:
                parts.append(f"-{m}")
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts).replace("+ -", "- ")


_ZERO_COEFF = CoeffPoly()


def _sorted_template_terms(acc: dict[Monomial, CoeffPoly]):
    return tuple(sorted(((m, c) for m, c in acc.items() if not c.is_zero()),
                        key=lambda it: it[0].sort_key()))


@dataclass(frozen=True)
class TemplatePolynomial:
    """A polynomial over program variables with :class:`CoeffPoly` coefficients.

    A template polynomial with only constant coefficients is *ground*; ground
    polynomials are ordinary rational polynomials in the program variables.
    """

    terms: tuple[tuple[Monomial, CoeffPoly], ...] = ()

    @staticmethod
    def zero() -> "TemplatePolynomial":
        return _ZERO_TEMPLATE

    @staticmethod
    def const(value) -> "TemplatePolynomial":
        c = CoeffPoly.const(value)
        if c.is_zero():
            return _ZERO_TEMPLATE
        return TemplatePolynomial(((Monomial.one(), c),))

    @staticmethod
    def var(v: VarId) -> "TemplatePolynomial":
        """Lift a variable of either kind into a template polynomial."""
        if v.kind is VarKind.PROGRAM:
            return TemplatePolynomial(((Monomial.of(v), CoeffPoly.const(1)),))
        return TemplatePolynomial(((Monomial.one(), CoeffPoly.var(v)),))

    @staticmethod
    def monomial(m: Monomial, coeff: CoeffPoly | Fraction | int = 1) -> "TemplatePolynomial":
        c = coeff if isinstance(coeff, CoeffPoly) else CoeffPoly.const(coeff)
        if c.is_zero():
            return _ZERO_TEMPLATE
        return TemplatePolynomial(((m, c),))

    @staticmethod
    def from_terms(terms: Iterable[tuple[Monomial, CoeffPoly]]) -> "TemplatePolynomial":
        acc: dict[Monomial, CoeffPoly] = {}
        for m, c in terms:
            acc[m] = acc.get(m, CoeffPoly.zero()).add(c)
        return TemplatePolynomial(_sorted_template_terms(acc))

    def is_zero(self) -> bool:
        return not self.terms

    def is_ground(self) -> bool:
        return all(c.is_const() for _, c in self.terms)

    def is_const(self) -> bool:
        return all(m.is_one() for m, _ in self.terms)

    def const_value(self) -> Fraction:
        """Value of a ground constant polynomial (0 for the zero polynomial)."""
        if not self.terms:
            return Fraction(0)
        if not (self.is_const() and self.is_ground()):
            raise ValueError("not a ground constant")
        return self.terms[0][1].const_value()

    @property
    def degree(self) -> int:
        """Total degree in program variables."""
        return max((m.degree for m, _ in self.terms), default=0)

    @property
    def unknown_degree(self) -> int:
        return max((c.degree for _, c in self.terms), default=0)

    def coefficient(self, m: Monomial) -> CoeffPoly:
        for mono, c in self.terms:
            if mono == m:
                return c
        return CoeffPoly.zero()

    def coefficient_vector(self) -> tuple[tuple[Monomial, CoeffPoly], ...]:
        """All terms in graded-lexicographic monomial order (the storage order)."""
        return self.terms

    def program_variables(self) -> set[VarId]:
        out: set[VarId] = set()
        for m, _ in self.terms:
            out.update(m.variables())
        return out

    def unknown_variables(self) -> set[VarId]:
        out: set[VarId] = set()
        for _, c in self.terms:
            out.update(c.variables())
        return out

    def add(self, other: "TemplatePolynomial") -> "TemplatePolynomial":
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, CoeffPoly.zero()).add(c)
        return TemplatePolynomial(_sorted_template_terms(acc))

    def neg(self) -> "TemplatePolynomial":
        return TemplatePolynomial(tuple((m, c.neg()) for m, c in self.terms))

    def sub(self, other: "TemplatePolynomial") -> "TemplatePolynomial":
        return self.add(other.neg())

    def mul(self, other: "TemplatePolynomial") -> "TemplatePolynomial":
        acc: dict[Monomial, CoeffPoly] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = m1.mul(m2)
                p = c1.mul(c2)
                acc[m] = acc.get(m, CoeffPoly.zero()).add(p)
        return TemplatePolynomial(_sorted_template_terms(acc))

    def scale(self, k) -> "TemplatePolynomial":
        q = _as_rat(k)
        if q == 0:
            return _ZERO_TEMPLATE
        return TemplatePolynomial(tuple((m, c.scale(q)) for m, c in self.terms))

    def pow(self, n: int) -> "TemplatePolynomial":
        if n < 0:
            raise ValueError("negative power")
        result = TemplatePolynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result.mul(base)
            n >>= 1
            if n:
                base = base.mul(base)
        return result

    def substitute(self, bindings: Mapping[VarId, "TemplatePolynomial"]) -> "TemplatePolynomial":
        """Simultaneously replace program variables by polynomials.

        Variables absent from ``bindings`` are left intact; the result is
        expanded to canonical form.
        """
        for v in bindings:
            if v.kind is not VarKind.PROGRAM:
                raise ValueError(f"cannot substitute unknown variable {v.name}")
        if not bindings:
            return self
        result = TemplatePolynomial.zero()
        for m, c in self.terms:
            factor = TemplatePolynomial.monomial(Monomial.one(), c)
            for v, e in m.powers:
                repl = bindings.get(v)
                if repl is None:
                    repl = TemplatePolynomial.var(v)
                factor = factor.mul(repl.pow(e))
            result = result.add(factor)
        return result

    def evaluate(self, point: Mapping[VarId, Fraction]) -> Fraction:
        """Exact value at a point binding every variable of both kinds."""
        total = Fraction(0)
        for m, c in self.terms:
            total += c.evaluate(point) * m.evaluate(point)
        return total

    def ground_coefficients(self) -> dict[Monomial, Fraction]:
        """Monomial-to-rational map of a ground polynomial."""
        out = {}
        for m, c in self.terms:
            out[m] = c.const_value()
        return out

    def __add__(self, other: "TemplatePolynomial") -> "TemplatePolynomial":
        return self.add(other)

    def __sub__(self, other: "TemplatePolynomial") -> "TemplatePolynomial":
        return self.sub(other)

    def __mul__(self, other: "TemplatePolynomial") -> "TemplatePolynomial":
        return self.mul(other)

    def __neg__(self) -> "TemplatePolynomial":
        return self.neg()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            if m.is_one():
                parts.append(f"({c})" if len(c.terms) > 1 else str(c))
            elif c.is_const() and c.const_value() == 1:
                parts.append(str(m))
            elif c.is_const() and c.const_value() == -1:
                parts.append(f"-{m}")
            elif len(c.terms) > 1:
                parts.append(f"({c})*{m}")
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts).replace("+ -", "- ")


_ZERO_TEMPLATE = TemplatePolynomial()


def poly_sum(polys: Iterable[TemplatePolynomial]) -> TemplatePolynomial:
    total = TemplatePolynomial.zero()
    for p in polys:
        total = total.add(p)
    return total


def all_variables(p: TemplatePolynomial) -> Iterator[VarId]:
    seen: set[VarId] = set()
    for m, c in p.terms:
        for v in m.variables():
            if v not in seen:
                seen.add(v)
                yield v
        for v in c.variables():
            if v not in seen:
                seen.add(v)
                yield v
