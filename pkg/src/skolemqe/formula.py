"""Prenex quantified formulas over real arithmetic: matrices, CNF, negation.

Atoms are canonicalised at construction so that every relation compares a
polynomial to zero from above: only ``> 0``, ``>= 0`` and ``= 0`` survive
(``p < 0`` becomes ``-p > 0`` and so on).  Disequalities are split into a
disjunction of strict inequalities, so matrices contain no negation nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import SizeLimitExceeded
from .poly import TemplatePolynomial, VarId

DEFAULT_CLAUSE_BUDGET = 10_000


class Relation(Enum):
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "="
    NE = "!="


class Quantifier(Enum):
    FORALL = "forall"
    EXISTS = "exists"


@dataclass(frozen=True)
class Atom:
    """``poly rel 0`` with ``rel`` restricted to GT, GE or EQ."""

    poly: TemplatePolynomial
    rel: Relation

    def __post_init__(self):
        if self.rel not in (Relation.GT, Relation.GE, Relation.EQ):
            raise ValueError(f"atom relation must be canonical, got {self.rel}")

    def evaluate(self, point: Mapping[VarId, Fraction]) -> bool:
        value = self.poly.evaluate(point)
        if self.rel is Relation.GT:
            return value > 0
        if self.rel is Relation.GE:
            return value >= 0
        return value == 0

    def __str__(self) -> str:
        return f"{self.poly} {self.rel.value} 0"


@dataclass(frozen=True)
class And:
    children: tuple["BoolNode", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["BoolNode", ...]


BoolNode = Union[Atom, And, Or]


def make_atom(poly: TemplatePolynomial, rel: Relation) -> BoolNode:
    """Build a canonical atom, flipping the comparison or splitting ``!=``."""
    if rel is Relation.LT:
        return Atom(poly.neg(), Relation.GT)
    if rel is Relation.LE:
        return Atom(poly.neg(), Relation.GE)
    if rel is Relation.NE:
        return Or((Atom(poly.neg(), Relation.GT), Atom(poly, Relation.GT)))
    return Atom(poly, rel)


def conj(children: Iterable[BoolNode]) -> BoolNode:
    kids = _flatten(children, And)
    return kids[0] if len(kids) == 1 else And(tuple(kids))


def disj(children: Iterable[BoolNode]) -> BoolNode:
    kids = _flatten(children, Or)
    return kids[0] if len(kids) == 1 else Or(tuple(kids))


def _flatten(children, node_type) -> list[BoolNode]:
    out: list[BoolNode] = []
    for c in children:
        if isinstance(c, node_type):
            out.extend(c.children)
        else:
            out.append(c)
    if not out:
        raise ValueError("connective needs at least one child")
    return out


def negate_node(node: BoolNode) -> BoolNode:
    """Logical negation pushed to the atoms."""
    if isinstance(node, And):
        return disj(negate_node(c) for c in node.children)
    if isinstance(node, Or):
        return conj(negate_node(c) for c in node.children)
    if node.rel is Relation.GT:
        return Atom(node.poly.neg(), Relation.GE)
    if node.rel is Relation.GE:
        return Atom(node.poly.neg(), Relation.GT)
    # p = 0 negates to p != 0, split into strict halves
    return Or((Atom(node.poly.neg(), Relation.GT), Atom(node.poly, Relation.GT)))


def evaluate_node(node: BoolNode, point: Mapping[VarId, Fraction]) -> bool:
    if isinstance(node, And):
        return all(evaluate_node(c, point) for c in node.children)
    if isinstance(node, Or):
        return any(evaluate_node(c, point) for c in node.children)
    return node.evaluate(point)


def node_atoms(node: BoolNode):
    if isinstance(node, (And, Or)):
        for c in node.children:
            yield from node_atoms(c)
    else:
        yield node


def substitute_node(node: BoolNode, bindings: Mapping[VarId, TemplatePolynomial]) -> BoolNode:
    if isinstance(node, And):
        return And(tuple(substitute_node(c, bindings) for c in node.children))
    if isinstance(node, Or):
        return Or(tuple(substitute_node(c, bindings) for c in node.children))
    return Atom(node.poly.substitute(bindings), node.rel)


Clause = tuple[Atom, ...]


@dataclass(frozen=True)
class QuantifiedFormula:
    """A closed prenex formula: quantifier prefix plus quantifier-free matrix.

    ``cnf``, when present, is a clause list equivalent to the matrix.
    """

    prefix: tuple[tuple[Quantifier, VarId], ...]
    matrix: BoolNode
    cnf: tuple[Clause, ...] | None = None

    def variables(self) -> tuple[VarId, ...]:
        return tuple(v for _, v in self.prefix)

    def universals(self) -> tuple[VarId, ...]:
        return tuple(v for q, v in self.prefix if q is Quantifier.FORALL)

    def existentials(self) -> tuple[VarId, ...]:
        return tuple(v for q, v in self.prefix if q is Quantifier.EXISTS)


def _count_clauses(node: BoolNode) -> int:
    if isinstance(node, And):
        return sum(_count_clauses(c) for c in node.children)
    if isinstance(node, Or):
        total = 1
        for c in node.children:
            total *= _count_clauses(c)
        return total
    return 1


def _distribute(node: BoolNode) -> list[list[Atom]]:
    if isinstance(node, And):
        out: list[list[Atom]] = []
        for c in node.children:
            out.extend(_distribute(c))
        return out
    if isinstance(node, Or):
        acc: list[list[Atom]] = [[]]
        for c in node.children:
            sub = _distribute(c)
            acc = [left + right for left in acc for right in sub]
        return acc
    return [[node]]


def matrix_to_cnf(node: BoolNode, max_clauses: int = DEFAULT_CLAUSE_BUDGET) -> tuple[Clause, ...]:
    expected = _count_clauses(node)
    if expected > max_clauses:
        raise SizeLimitExceeded(
            f"CNF distribution would produce {expected} clauses (budget {max_clauses})")
    return tuple(tuple(clause) for clause in _distribute(node))


def to_cnf(f: QuantifiedFormula, max_clauses: int = DEFAULT_CLAUSE_BUDGET) -> QuantifiedFormula:
    """Populate the clause form of the matrix by distribution."""
    if f.cnf is not None:
        return f
    return QuantifiedFormula(f.prefix, f.matrix, matrix_to_cnf(f.matrix, max_clauses))


def negate(f: QuantifiedFormula, max_clauses: int = DEFAULT_CLAUSE_BUDGET) -> QuantifiedFormula:
    """Negate a closed prenex formula: flip quantifiers, negate the matrix."""
    flipped = tuple(
        (Quantifier.EXISTS if q is Quantifier.FORALL else Quantifier.FORALL, v)
        for q, v in f.prefix)
    matrix = negate_node(f.matrix)
    return QuantifiedFormula(flipped, matrix, matrix_to_cnf(matrix, max_clauses))


def cnf_node(f: QuantifiedFormula) -> BoolNode:
    """The clause list rebuilt as an explicit And-of-Ors tree."""
    if f.cnf is None:
        raise ValueError("cnf not populated")
    return conj(disj(clause) for clause in f.cnf) if f.cnf else Atom(
        TemplatePolynomial.zero(), Relation.GE)
