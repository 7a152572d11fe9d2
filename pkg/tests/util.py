"""Shared helpers for randomized tests: seeded generators over exact rationals."""

from __future__ import annotations

import random
from fractions import Fraction

from skolemqe.poly import (CoeffPoly, Monomial, TemplatePolynomial, VarId,
                           program_var, unknown_var)

PROGRAM_VARS = tuple(program_var(f"x{i}") for i in range(1, 5))
UNKNOWN_VARS = tuple(unknown_var(f"u{i}") for i in range(1, 4))


def random_rational(rng: random.Random, span: int = 6) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, 4)
    return Fraction(num, den)


def random_monomial(rng: random.Random, variables, max_degree: int = 3) -> Monomial:
    exps = {}
    budget = rng.randint(0, max_degree)
    for _ in range(budget):
        v = rng.choice(variables)
        exps[v] = exps.get(v, 0) + 1
    return Monomial.from_dict(exps)


def random_coeffpoly(rng: random.Random, max_terms: int = 3) -> CoeffPoly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        m = random_monomial(rng, UNKNOWN_VARS, 2)
        terms[m] = terms.get(m, Fraction(0)) + random_rational(rng)
    return CoeffPoly.from_dict(terms)


def random_template(rng: random.Random, max_terms: int = 4,
                    ground: bool = False) -> TemplatePolynomial:
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        m = random_monomial(rng, PROGRAM_VARS, 3)
        if ground:
            c = CoeffPoly.const(random_rational(rng))
        else:
            c = random_coeffpoly(rng)
        terms.append((m, c))
    return TemplatePolynomial.from_terms(terms)


def random_point(rng: random.Random, variables) -> dict[VarId, Fraction]:
    return {v: random_rational(rng) for v in variables}


def full_point(rng: random.Random, *polys) -> dict[VarId, Fraction]:
    """A point binding every variable of every given polynomial."""
    point: dict[VarId, Fraction] = {}
    for p in polys:
        for v in p.program_variables() | p.unknown_variables():
            point.setdefault(v, random_rational(rng))
    return point
