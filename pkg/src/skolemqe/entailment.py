"""Clause-to-entailment conversion and theorem-case classification.

A disjunctive clause ``l1 or ... or lw`` holds universally iff the
implication ``not l1 and ... and not l(w-1)  =>  lw`` does; single-literal
clauses become ``1 > 0 => l1``.  Negating an atom flips strictness and
sign; a disequality hypothesis (from negating an equality literal) splits
the entailment into one branch per strict side, and an equality conclusion
produces one entailment per non-strict side, all of which must be encoded.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .formula import Atom, Clause, Relation
from .poly import TemplatePolynomial, VarId


@dataclass(frozen=True)
class SignedConstraint:
    """``poly > 0`` when strict else ``poly >= 0``."""

    poly: TemplatePolynomial
    strict: bool

    def holds_at(self, point: Mapping[VarId, Fraction]) -> bool:
        value = self.poly.evaluate(point)
        return value > 0 if self.strict else value >= 0

    def __str__(self) -> str:
        return f"{self.poly} {'>' if self.strict else '>='} 0"


TRIVIAL_HYPOTHESIS = SignedConstraint(TemplatePolynomial.const(1), True)


@dataclass(frozen=True)
class PolynomialEntailment:
    """Hypotheses jointly entailing one conclusion, all compared to zero."""

    hypotheses: tuple[SignedConstraint, ...]
    conclusion: SignedConstraint

    def holds_at(self, point: Mapping[VarId, Fraction]) -> bool:
        if all(h.holds_at(point) for h in self.hypotheses):
            return self.conclusion.holds_at(point)
        return True


class TheoremCase(Enum):
    FARKAS_LINEAR = "farkas"
    HANDELMAN_LINEAR_HYP = "handelman"
    PUTINAR_GENERAL = "putinar"
    NONLINEAR_HANDELMAN = "nl-handelman"


class ConclusionStrategy(Enum):
    LAST_LITERAL = "last"
    TRY_EACH = "try-each"


def negated_atom_constraints(atom: Atom) -> tuple[SignedConstraint, ...]:
    """The hypothesis constraints expressing the negation of ``atom``.

    Negating an equality gives a disequality, which is a disjunction of two
    strict sides; multiple tuples returned here multiply into separate
    entailments (one per side).
    """
    if atom.rel is Relation.GT:
        return (SignedConstraint(atom.poly.neg(), False),)
    if atom.rel is Relation.GE:
        return (SignedConstraint(atom.poly.neg(), True),)
    return (SignedConstraint(atom.poly, True),
            SignedConstraint(atom.poly.neg(), True))


def atom_constraints(atom: Atom) -> tuple[SignedConstraint, ...]:
    """``atom`` itself as a conjunction of signed constraints.

    An equality contributes two non-strict constraints.
    """
    if atom.rel is Relation.GT:
        return (SignedConstraint(atom.poly, True),)
    if atom.rel is Relation.GE:
        return (SignedConstraint(atom.poly, False),)
    return (SignedConstraint(atom.poly, False),
            SignedConstraint(atom.poly.neg(), False))


def conclusion_constraints(atom: Atom) -> tuple[SignedConstraint, ...]:
    """Conclusion alternatives for ``atom``; an equality must be proved on
    both sides, yielding one entailment per returned constraint."""
    if atom.rel is Relation.GT:
        return (SignedConstraint(atom.poly, True),)
    if atom.rel is Relation.GE:
        return (SignedConstraint(atom.poly, False),)
    return (SignedConstraint(atom.poly, False),
            SignedConstraint(atom.poly.neg(), False))


def _ground_constant(p: TemplatePolynomial) -> Fraction | None:
    if p.is_zero():
        return Fraction(0)
    if p.is_ground() and p.is_const():
        return p.const_value()
    return None


def _build_entailments(hypothesis_literals: Iterable[Atom],
                       conclusion: Atom) -> list[PolynomialEntailment]:
    """Entailments for one conclusion choice, with eager constant handling.

    Ground-constant atoms are evaluated: a false hypothesis makes the
    entailment vacuously true (nothing to encode), a true hypothesis is
    dropped, and a true conclusion needs no certificate.  A false constant
    conclusion is kept so the encoders may derive a contradiction from the
    hypotheses.
    """
    hypothesis_branches: list[tuple[SignedConstraint, ...]] = [()]
    for lit in hypothesis_literals:
        alternatives = negated_atom_constraints(lit)
        hypothesis_branches = [branch + (alt,)
                               for branch in hypothesis_branches
                               for alt in alternatives]
    out: list[PolynomialEntailment] = []
    for concl in conclusion_constraints(conclusion):
        cval = _ground_constant(concl.poly)
        if cval is not None:
            if (cval > 0) if concl.strict else (cval >= 0):
                continue  # conclusion already true
        for branch in hypothesis_branches:
            kept: list[SignedConstraint] = []
            vacuous = False
            for h in branch:
                hval = _ground_constant(h.poly)
                if hval is None:
                    kept.append(h)
                elif (hval > 0) if h.strict else (hval >= 0):
                    continue  # trivially true hypothesis adds nothing
                else:
                    vacuous = True  # false hypothesis: entailment holds
                    break
            if vacuous:
                continue
            if not kept:
                kept = [TRIVIAL_HYPOTHESIS]
            out.append(PolynomialEntailment(tuple(kept), concl))
    return out


def clause_to_entailments(clause: Clause,
                          strategy: ConclusionStrategy = ConclusionStrategy.LAST_LITERAL,
                          ) -> list[PolynomialEntailment]:
    """Rewrite a clause into polynomial entailments.

    With LAST_LITERAL the conclusion is the final literal and the remaining
    literals are negated into hypotheses.  With TRY_EACH one group of
    entailments is produced per conclusion choice; certifying any single
    choice suffices for the clause.
    """
    if not clause:
        raise ValueError("empty clause")
    if strategy is ConclusionStrategy.LAST_LITERAL:
        choices = [len(clause) - 1]
    else:
        choices = list(range(len(clause) - 1, -1, -1))
    out: list[PolynomialEntailment] = []
    for idx in choices:
        rest = clause[:idx] + clause[idx + 1:]
        out.extend(_build_entailments(rest, clause[idx]))
    return out


def entailment_groups(clause: Clause,
                      strategy: ConclusionStrategy) -> list[list[PolynomialEntailment]]:
    """Entailment groups per conclusion choice; each group must be encoded
    jointly, and any one satisfiable group certifies the clause."""
    if not clause:
        raise ValueError("empty clause")
    if strategy is ConclusionStrategy.LAST_LITERAL:
        choices = [len(clause) - 1]
    else:
        choices = list(range(len(clause) - 1, -1, -1))
    groups = []
    for idx in choices:
        rest = clause[:idx] + clause[idx + 1:]
        groups.append(_build_entailments(rest, clause[idx]))
    return groups


def classify(e: PolynomialEntailment) -> TheoremCase:
    """Theorem dispatch by program-variable degree.

    All degrees at most one selects the linear-combination certificate;
    linear hypotheses with a higher-degree conclusion select the semigroup
    certificate; anything else selects the sum-of-squares certificate.  The
    non-linear semigroup variant is only chosen by explicit override.
    """
    hyp_degree = max((h.poly.degree for h in e.hypotheses), default=0)
    concl_degree = e.conclusion.poly.degree
    if hyp_degree <= 1 and concl_degree <= 1:
        return TheoremCase.FARKAS_LINEAR
    if hyp_degree <= 1:
        return TheoremCase.HANDELMAN_LINEAR_HYP
    return TheoremCase.PUTINAR_GENERAL


def all_choice_combinations(groups_per_clause: list[list[list[PolynomialEntailment]]],
                            limit: int) -> list[tuple[int, ...]]:
    """Index combinations selecting one conclusion choice per clause,
    capped at ``limit`` in lexicographic order."""
    ranges = [range(len(g)) for g in groups_per_clause]
    combos = []
    for combo in product(*ranges):
        combos.append(combo)
        if len(combos) >= limit:
            break
    return combos
