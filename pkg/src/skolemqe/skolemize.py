"""Existential quantifier elimination via polynomial templates.

Each existential variable is replaced by a symbolic polynomial over the
universally quantified variables that precede it in the prefix.  The
polynomial's coefficients are fresh unknown variables named
``c_<prefixPosition>_<monomialIndex>`` with monomial indices following the
graded-lexicographic order, so the unknown set for degree D is a prefix of
the one for degree D+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .formula import Atom, Clause, QuantifiedFormula, Quantifier
from .poly import (CoeffPoly, Monomial, TemplatePolynomial, VarId,
                   unknown_var)


def monomials_up_to_degree(variables: tuple[VarId, ...], degree: int) -> tuple[Monomial, ...]:
    """All monomials over ``variables`` with total degree at most ``degree``,
    in graded-lexicographic order starting from the constant monomial.

    The count is C(len(variables) + degree, degree).
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    out: list[Monomial] = []

    def exact(prefix: dict[VarId, int], index: int, remaining: int):
        if index == len(variables):
            if remaining == 0:
                out.append(Monomial.from_dict(prefix))
            return
        # highest exponent on the earliest variable first within a degree
        for e in range(remaining, -1, -1):
            if e:
                prefix[variables[index]] = e
            exact(prefix, index + 1, remaining - e)
            prefix.pop(variables[index], None)

    for d in range(degree + 1):
        exact({}, 0, d)
    assert len(out) == comb(len(variables) + degree, degree)
    return tuple(out)


@dataclass(frozen=True)
class SkolemTemplate:
    """Symbolic polynomial standing in for one existential variable."""

    target: VarId
    scope: tuple[VarId, ...]
    degree: int
    body: TemplatePolynomial
    unknowns: tuple[VarId, ...]


@dataclass(frozen=True)
class UniversalFormula:
    """A purely universal formula with template unknowns in its atoms."""

    universals: tuple[VarId, ...]
    clauses: tuple[Clause, ...]
    templates: dict[VarId, SkolemTemplate]


def build_template(target: VarId, position: int, scope: tuple[VarId, ...],
                   degree: int) -> SkolemTemplate:
    monomials = monomials_up_to_degree(scope, degree)
    unknowns = tuple(unknown_var(f"c_{position}_{j + 1}") for j in range(len(monomials)))
    body = TemplatePolynomial.from_terms(
        (m, CoeffPoly.var(u)) for m, u in zip(monomials, unknowns))
    return SkolemTemplate(target, scope, degree, body, unknowns)


def skolemize(f: QuantifiedFormula, degree: int) -> UniversalFormula:
    """Replace every existential variable by its template polynomial.

    The scope of the i-th prefix variable consists of the universal
    variables strictly preceding it; earlier existentials never appear in a
    later template body.
    """
    if f.cnf is None:
        raise ValueError("formula must have cnf populated (call to_cnf first)")
    templates: dict[VarId, SkolemTemplate] = {}
    universals: list[VarId] = []
    for index, (q, v) in enumerate(f.prefix):
        if q is Quantifier.FORALL:
            universals.append(v)
        else:
            templates[v] = build_template(v, index + 1, tuple(universals), degree)
    bindings = {v: t.body for v, t in templates.items()}
    clauses = tuple(
        tuple(Atom(a.poly.substitute(bindings), a.rel) for a in clause)
        for clause in f.cnf)
    return UniversalFormula(tuple(universals), clauses, templates)
