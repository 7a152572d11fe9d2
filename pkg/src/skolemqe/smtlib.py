"""SMT-LIB 2 text generation for constraint systems and ground queries."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

from .encoders import ConstraintSystem
from .formula import And, Atom, BoolNode, Or, Relation
from .poly import CoeffPoly, Monomial, TemplatePolynomial, VarId


class Logic(Enum):
    QF_LRA = "QF_LRA"
    QF_NRA = "QF_NRA"


def rational_smt(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator) if q >= 0 else f"(- {-q.numerator})"
    body = f"(/ {abs(q.numerator)} {q.denominator})"
    return body if q >= 0 else f"(- {body})"


def _term_smt(coeff: Fraction, mono: Monomial) -> str:
    factors: list[str] = []
    if coeff != 1 or mono.is_one():
        factors.append(rational_smt(coeff))
    for v, e in mono.powers:
        factors.extend([v.name] * e)
    if len(factors) == 1:
        return factors[0]
    return "(* " + " ".join(factors) + ")"


def coeffpoly_smt(p: CoeffPoly) -> str:
    if p.is_zero():
        return "0"
    terms = [_term_smt(c, m) for m, c in p.terms]
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


def ground_poly_smt(p: TemplatePolynomial) -> str:
    """A ground template polynomial as an SMT term over program variables."""
    if p.is_zero():
        return "0"
    terms = [_term_smt(c.const_value(), m) for m, c in p.terms]
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


_REL_SMT = {Relation.GT: ">", Relation.GE: ">=", Relation.EQ: "="}


def node_smt(node: BoolNode) -> str:
    if isinstance(node, And):
        return "(and " + " ".join(node_smt(c) for c in node.children) + ")"
    if isinstance(node, Or):
        return "(or " + " ".join(node_smt(c) for c in node.children) + ")"
    return f"({_REL_SMT[node.rel]} {ground_poly_smt(node.poly)} 0)"


def system_script(system: ConstraintSystem, logic: Logic) -> str:
    """A complete check-sat script for an existential constraint system.

    Declarations are sorted by name; assertions keep the system's order, so
    identical systems produce byte-identical scripts.
    """
    lines = [f"(set-logic {logic.value})"]
    for v in system.unknowns():
        lines.append(f"(declare-const {v.name} Real)")
    for p in system.equalities:
        lines.append(f"(assert (= {coeffpoly_smt(p)} 0))")
    for p, strict in system.inequalities:
        op = ">" if strict else ">="
        lines.append(f"(assert ({op} {coeffpoly_smt(p)} 0))")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


def negation_query_script(matrix: BoolNode, variables: tuple[VarId, ...],
                          logic: Logic) -> str:
    """Script asserting the negation of a ground matrix over its variables.

    ``unsat`` answers prove the matrix holds for every real assignment.
    """
    lines = [f"(set-logic {logic.value})"]
    for v in variables:
        lines.append(f"(declare-const {v.name} Real)")
    lines.append(f"(assert (not {node_smt(matrix)}))")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"
