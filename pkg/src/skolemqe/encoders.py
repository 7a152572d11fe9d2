"""Certificate encodings turning entailments into existential constraints.

Each encoder rewrites ``H1 >= 0 and ... and Hm >= 0  =>  G >= 0`` (or
``> 0``) into a purely existential system over fresh unknowns by equating,
monomial by monomial, the conclusion against a nonnegative combination of
the hypotheses:

* linear combination with scalar multipliers (all-linear case),
* multipliers over the semigroup of hypothesis products (linear
  hypotheses, polynomial conclusion, bounded product multiplicity),
* sum-of-squares polynomial multipliers with positive semidefiniteness
  realised as a symbolic lower-triangular factorisation L*L^T, which turns
  the membership condition into quadratic equations,
* the semigroup form over non-linear hypotheses (sound only).

Strict hypotheses are soundly weakened to non-strict before combination;
strict conclusions require a strictly positive constant contribution (the
trivial multiplier, the empty-product multiplier, or a fresh slack added
to the constant term, respectively).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .entailment import PolynomialEntailment, SignedConstraint, TheoremCase, classify
from .errors import SizeLimitExceeded, WrongCase
from .poly import (CoeffPoly, Monomial, TemplatePolynomial, VarId,
                   unknown_var)
from .skolemize import monomials_up_to_degree

DEFAULT_SEMIGROUP_BUDGET = 5_000


@dataclass(frozen=True)
class ConstraintSystem:
    """Conjunction of polynomial equalities and inequalities over unknowns."""

    equalities: tuple[CoeffPoly, ...] = ()
    inequalities: tuple[tuple[CoeffPoly, bool], ...] = ()

    def conjoin(self, other: "ConstraintSystem") -> "ConstraintSystem":
        return ConstraintSystem(self.equalities + other.equalities,
                                self.inequalities + other.inequalities)

    @staticmethod
    def conjunction(systems: Iterable["ConstraintSystem"]) -> "ConstraintSystem":
        total = ConstraintSystem()
        for s in systems:
            total = total.conjoin(s)
        return total

    def unknowns(self) -> tuple[VarId, ...]:
        seen: set[VarId] = set()
        for p in self.equalities:
            seen.update(p.variables())
        for p, _ in self.inequalities:
            seen.update(p.variables())
        return tuple(sorted(seen, key=lambda v: v.sort_key()))

    def max_degree(self) -> int:
        degrees = [p.degree for p in self.equalities]
        degrees += [p.degree for p, _ in self.inequalities]
        return max(degrees, default=0)

    def satisfied_by(self, assignment: Mapping[VarId, Fraction]) -> bool:
        """Exact check of every constraint at ``assignment``."""
        for p in self.equalities:
            if p.evaluate(assignment) != 0:
                return False
        for p, strict in self.inequalities:
            value = p.evaluate(assignment)
            if strict and not value > 0:
                return False
            if not strict and not value >= 0:
                return False
        return True

    def violations(self, assignment: Mapping[VarId, Fraction]) -> list[str]:
        out = []
        for p in self.equalities:
            v = p.evaluate(assignment)
            if v != 0:
                out.append(f"{p} = 0 evaluates to {v}")
        for p, strict in self.inequalities:
            v = p.evaluate(assignment)
            ok = v > 0 if strict else v >= 0
            if not ok:
                out.append(f"{p} {'>' if strict else '>='} 0 evaluates to {v}")
        return out


EMPTY_SYSTEM = ConstraintSystem()


class UnknownFactory:
    """Fresh unknown-variable names, optionally scoped by a prefix."""

    def __init__(self, scope: str = ""):
        self.scope = scope

    def named(self, name: str) -> VarId:
        return unknown_var(f"{self.scope}{name}")


@dataclass(frozen=True)
class EncoderConfig:
    handelman_degree: int = 2
    sos_degree: int | None = None
    theorem: TheoremCase | None = None
    semigroup_budget: int = DEFAULT_SEMIGROUP_BUDGET


def _weakened(hyps: tuple[SignedConstraint, ...]) -> list[TemplatePolynomial]:
    # soundly treat every hypothesis as non-strict for combination purposes
    return [h.poly for h in hyps]


def _match_equalities(difference: TemplatePolynomial) -> tuple[CoeffPoly, ...]:
    # the entailment certificate is exact monomial-wise equality
    return tuple(c for _, c in difference.coefficient_vector())


def farkas_encode(e: PolynomialEntailment,
                  namer: UnknownFactory | None = None) -> ConstraintSystem:
    """Linear-combination certificate for all-linear entailments.

    Produces fresh multipliers y0 (for the trivial inequality ``1 >= 0``)
    and y1..ym, the coefficient-matching equalities, and y >= 0.  A strict
    conclusion additionally requires y0 plus the multipliers of originally
    strict hypotheses to be positive.
    """
    if classify(e) is not TheoremCase.FARKAS_LINEAR:
        raise WrongCase("entailment is not linear in program variables")
    namer = namer or UnknownFactory()
    y0 = namer.named("y0")
    multipliers = [namer.named(f"y{i + 1}") for i in range(len(e.hypotheses))]
    combination = TemplatePolynomial.monomial(Monomial.one(), CoeffPoly.var(y0))
    for y, h in zip(multipliers, _weakened(e.hypotheses)):
        combination = combination.add(
            h.mul(TemplatePolynomial.monomial(Monomial.one(), CoeffPoly.var(y))))
    equalities = _match_equalities(e.conclusion.poly.sub(combination))
    inequalities = [(CoeffPoly.var(y0), False)]
    inequalities += [(CoeffPoly.var(y), False) for y in multipliers]
    if e.conclusion.strict:
        witness = CoeffPoly.var(y0)
        for y, h in zip(multipliers, e.hypotheses):
            if h.strict:
                witness = witness.add(CoeffPoly.var(y))
        inequalities.append((witness, True))
    return ConstraintSystem(equalities, tuple(inequalities))


def semigroup_generate(hypotheses: tuple[SignedConstraint, ...], degree: int,
                       budget: int = DEFAULT_SEMIGROUP_BUDGET,
                       ) -> tuple[TemplatePolynomial, ...]:
    """All products of hypothesis polynomials with total multiplicity at
    most ``degree``, the empty product 1 first, exponent vectors in
    graded-lexicographic order.  Exactly C(m + degree, degree) entries."""
    if degree < 1:
        raise ValueError("degree must be positive")
    m = len(hypotheses)
    count = comb(m + degree, degree)
    if count > budget:
        raise SizeLimitExceeded(
            f"semigroup of {m} hypotheses at multiplicity {degree} has {count} "
            f"elements (budget {budget})")
    polys = _weakened(hypotheses)
    out: list[TemplatePolynomial] = []
    for total in range(degree + 1):
        for exponents in _exponent_vectors(m, total):
            product = TemplatePolynomial.const(1)
            for p, k in zip(polys, exponents):
                if k:
                    product = product.mul(p.pow(k))
            out.append(product)
    return tuple(out)


def _exponent_vectors(m: int, total: int):
    """Exponent vectors of given total, earliest position largest first."""
    if m == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _exponent_vectors(m - 1, total - first):
            yield (first,) + rest


def semigroup_exponents(m: int, degree: int):
    """Exponent vectors matching the order of :func:`semigroup_generate`."""
    for total in range(degree + 1):
        yield from _exponent_vectors(m, total)


def handelman_encode(e: PolynomialEntailment, degree: int,
                     namer: UnknownFactory | None = None,
                     budget: int = DEFAULT_SEMIGROUP_BUDGET) -> ConstraintSystem:
    """Semigroup certificate for linear hypotheses and polynomial conclusion.

    One nonnegative multiplier per semigroup element; a strict conclusion
    requires the multiplier of the empty product (the constant 1) to be
    positive.
    """
    if classify(e) not in (TheoremCase.HANDELMAN_LINEAR_HYP, TheoremCase.FARKAS_LINEAR):
        raise WrongCase("hypotheses must be linear in program variables")
    return _semigroup_encode(e, degree, namer, budget)


def nonlinear_handelman_encode(e: PolynomialEntailment, degree: int,
                               namer: UnknownFactory | None = None,
                               budget: int = DEFAULT_SEMIGROUP_BUDGET) -> ConstraintSystem:
    """Semigroup certificate over possibly non-linear hypotheses.

    Sound but not complete: sum-of-squares multipliers are replaced by
    nonnegative constants.
    """
    return _semigroup_encode(e, degree, namer, budget)


def _semigroup_encode(e, degree, namer, budget) -> ConstraintSystem:
    namer = namer or UnknownFactory()
    elements = semigroup_generate(e.hypotheses, degree, budget)
    multipliers = [namer.named(f"y{i}") for i in range(len(elements))]
    combination = TemplatePolynomial.zero()
    for y, h in zip(multipliers, elements):
        combination = combination.add(
            h.mul(TemplatePolynomial.monomial(Monomial.one(), CoeffPoly.var(y))))
    equalities = _match_equalities(e.conclusion.poly.sub(combination))
    inequalities = [(CoeffPoly.var(y), False) for y in multipliers]
    if e.conclusion.strict:
        # the empty product is element 0
        inequalities.append((CoeffPoly.var(multipliers[0]), True))
    return ConstraintSystem(equalities, tuple(inequalities))


@dataclass(frozen=True)
class SosBlock:
    """A symbolic sum-of-squares polynomial over a monomial basis.

    The represented polynomial is a^T (L L^T) a for the basis vector a and
    a lower-triangular matrix L of fresh unknowns, which is a sum of
    squares for every real assignment of the entries.
    """

    monomial_basis: tuple[Monomial, ...]
    entries: tuple[tuple[VarId, ...], ...]  # row i holds entries (i,0)..(i,i)
    expanded: TemplatePolynomial

    def entry(self, row: int, col: int) -> VarId:
        return self.entries[row][col]

    def unknowns(self) -> tuple[VarId, ...]:
        return tuple(v for row in self.entries for v in row)


def sos_template(variables: tuple[VarId, ...], degree: int,
                 namer: UnknownFactory | None = None,
                 tag: str = "l") -> SosBlock:
    """Symbolic SOS block over all monomials of degree at most ``degree``.

    Entry (i, j) of the factor is named ``<tag>_<i>_<j>``; the expanded
    polynomial is the sum of squares of the factor's columns dotted with
    the basis and has unknown-degree exactly two.
    """
    namer = namer or UnknownFactory()
    basis = monomials_up_to_degree(variables, degree)
    n = len(basis)
    entries = tuple(
        tuple(namer.named(f"{tag}_{i}_{j}") for j in range(i + 1))
        for i in range(n))
    expanded = TemplatePolynomial.zero()
    for j in range(n):
        column = TemplatePolynomial.zero()
        for i in range(j, n):
            column = column.add(
                TemplatePolynomial.monomial(basis[i], CoeffPoly.var(entries[i][j])))
        expanded = expanded.add(column.mul(column))
    return SosBlock(basis, entries, expanded)


def _sos_block_degree(conclusion_degree: int, hyp_degree: int) -> int:
    # smallest basis degree whose square, times the hypothesis, reaches the
    # conclusion degree
    needed = max(0, conclusion_degree - hyp_degree)
    return (needed + 1) // 2


def putinar_encode(e: PolynomialEntailment, degree: int | None = None,
                   namer: UnknownFactory | None = None) -> ConstraintSystem:
    """Sum-of-squares certificate for general polynomial entailments.

    The conclusion is matched against h0 + sum(hi * Hi) with every hi a
    symbolic SOS block; equating coefficients yields quadratic (and, where
    hypotheses carry unknowns, cubic) equations.  A strict conclusion adds
    a fresh slack unknown, asserted positive, to the constant term.

    ``degree`` fixes the monomial-basis degree of every block; when absent
    each block gets the smallest degree that lets its product reach the
    conclusion's degree.
    """
    namer = namer or UnknownFactory()
    variables = set(e.conclusion.poly.program_variables())
    for h in e.hypotheses:
        variables.update(h.poly.program_variables())
    ordered = tuple(sorted(variables, key=lambda v: v.sort_key()))
    concl_degree = e.conclusion.poly.degree
    blocks: list[SosBlock] = []
    d0 = degree if degree is not None else _sos_block_degree(concl_degree, 0)
    blocks.append(sos_template(ordered, d0, namer, tag="l0"))
    combination = blocks[0].expanded
    for i, h in enumerate(_weakened(e.hypotheses)):
        di = degree if degree is not None else _sos_block_degree(concl_degree, h.degree)
        block = sos_template(ordered, di, namer, tag=f"l{i + 1}")
        blocks.append(block)
        combination = combination.add(block.expanded.mul(h))
    inequalities: list[tuple[CoeffPoly, bool]] = []
    if e.conclusion.strict:
        eps = namer.named("eps")
        combination = combination.add(
            TemplatePolynomial.monomial(Monomial.one(), CoeffPoly.var(eps)))
        inequalities.append((CoeffPoly.var(eps), True))
    equalities = _match_equalities(e.conclusion.poly.sub(combination))
    return ConstraintSystem(equalities, tuple(inequalities))


def encode(e: PolynomialEntailment, config: EncoderConfig = EncoderConfig(),
           namer: UnknownFactory | None = None) -> ConstraintSystem:
    """Dispatch an entailment to the theorem selected by classification or
    by the configured override and return its constraint system."""
    case = config.theorem or classify(e)
    if case is TheoremCase.FARKAS_LINEAR:
        return farkas_encode(e, namer)
    if case is TheoremCase.HANDELMAN_LINEAR_HYP:
        return handelman_encode(e, config.handelman_degree, namer,
                                config.semigroup_budget)
    if case is TheoremCase.NONLINEAR_HANDELMAN:
        return nonlinear_handelman_encode(e, config.handelman_degree, namer,
                                          config.semigroup_budget)
    return putinar_encode(e, config.sos_degree, namer)
