"""Clause rewriting into entailments and theorem classification."""

from __future__ import annotations

import random
from fractions import Fraction

from skolemqe.entailment import (ConclusionStrategy, PolynomialEntailment,
                                 SignedConstraint, TheoremCase,
                                 atom_constraints, classify,
                                 clause_to_entailments, entailment_groups)
from skolemqe.formula import Atom, Relation, to_cnf
from skolemqe.parser import parse
from skolemqe.poly import Monomial, TemplatePolynomial, program_var
from skolemqe.skolemize import skolemize

from test_formula import ALTERNATING_LINEAR, DISC_PARABOLA
from util import full_point, random_rational

x = program_var("x")
X = TemplatePolynomial.var(x)
ONE = TemplatePolynomial.const(1)


def ge(p):
    return Atom(p, Relation.GE)


def gt(p):
    return Atom(p, Relation.GT)


def eq(p):
    return Atom(p, Relation.EQ)


class TestClauseConversion:
    def test_alternating_example_orientation(self):
        f = to_cnf(parse(ALTERNATING_LINEAR))
        uf = skolemize(f, 1)
        ents = clause_to_entailments(uf.clauses[0])
        assert len(ents) == 1
        e = ents[0]
        assert len(e.hypotheses) == 1
        hyp = e.hypotheses[0]
        # hypothesis: x4 - 1 - (c_3_1 + c_3_2 x1) >= 0
        assert not hyp.strict
        t3 = uf.templates[program_var("x3")]
        x4 = TemplatePolynomial.var(program_var("x4"))
        assert hyp.poly == x4.sub(TemplatePolynomial.const(1)).sub(t3.body)
        # conclusion: x4 - (c_2_1 + c_2_2 x1) >= 0
        assert not e.conclusion.strict
        t2 = uf.templates[program_var("x2")]
        assert e.conclusion.poly == x4.sub(t2.body)

    def test_singleton_gets_trivial_hypothesis(self):
        ents = clause_to_entailments((ge(X),))
        assert len(ents) == 1
        e = ents[0]
        assert len(e.hypotheses) == 1
        assert e.hypotheses[0].strict
        assert e.hypotheses[0].poly.const_value() == 1

    def test_try_each_counts(self):
        clause = (ge(X), gt(X.sub(ONE)), ge(ONE.sub(X)))
        groups = entailment_groups(clause, ConclusionStrategy.TRY_EACH)
        assert len(groups) == 3
        assert all(len(g) == 1 for g in groups)
        flat = clause_to_entailments(clause, ConclusionStrategy.TRY_EACH)
        assert len(flat) == 3

    def test_negation_flips_strictness_and_sign(self):
        ents = clause_to_entailments((gt(X), ge(ONE.sub(X))))
        hyp = ents[0].hypotheses[0]
        assert hyp.poly == X.neg()
        assert not hyp.strict
        ents = clause_to_entailments((ge(X), gt(ONE.sub(X))))
        hyp = ents[0].hypotheses[0]
        assert hyp.poly == X.neg()
        assert hyp.strict

    def test_equality_conclusion_two_sided(self):
        ents = clause_to_entailments((gt(X), eq(X.sub(ONE))))
        assert len(ents) == 2
        polys = {str(e.conclusion.poly) for e in ents}
        assert polys == {"-1 + x", "1 - x"}
        assert all(not e.conclusion.strict for e in ents)

    def test_equality_hypothesis_splits_entailment(self):
        # not(p = 0) is a disjunction, so each strict side gets its own entailment
        ents = clause_to_entailments((eq(X), ge(ONE.sub(X))))
        assert len(ents) == 2
        sides = {str(e.hypotheses[0].poly) for e in ents}
        assert sides == {"x", "-x"}
        assert all(e.hypotheses[0].strict for e in ents)

    def test_direct_equality_hypothesis_helper(self):
        pair = atom_constraints(eq(X))
        assert len(pair) == 2
        assert all(not c.strict for c in pair)
        assert {str(c.poly) for c in pair} == {"x", "-x"}

    def test_constant_atoms_evaluated_eagerly(self):
        # a false constant hypothesis makes the entailment vacuously true,
        # so nothing at all is encoded for it
        assert clause_to_entailments((gt(ONE), ge(X))) == []
        # a true constant hypothesis is dropped; the trivial 1 > 0 fills in
        ents = clause_to_entailments((ge(ONE.neg()), ge(X)))
        assert len(ents) == 1
        assert ents[0].hypotheses[0].poly.const_value() == 1
        assert ents[0].hypotheses[0].strict
        # true constant conclusion: nothing to prove
        assert clause_to_entailments((ge(X), gt(ONE))) == []
        # false constant conclusion is kept for contradiction derivation
        ents = clause_to_entailments((ge(X), ge(ONE.neg())))
        assert len(ents) == 1
        assert ents[0].conclusion.poly.const_value() == -1

    def test_rewriting_equivalence_sampled(self):
        rng = random.Random(101)
        f = to_cnf(parse(ALTERNATING_LINEAR))
        uf = skolemize(f, 1)
        for clause in uf.clauses:
            ents = clause_to_entailments(clause)
            for _ in range(200):
                point = {}
                for atom in clause:
                    point.update(full_point(rng, atom.poly))
                clause_holds = any(a.evaluate(point) for a in clause)
                entailments_hold = all(e.holds_at(point) for e in ents)
                assert clause_holds == entailments_hold

    def test_equality_clause_equivalence_sampled(self):
        rng = random.Random(103)
        clause = (eq(X.sub(ONE)), gt(X))
        ents = clause_to_entailments(clause)
        for _ in range(200):
            point = {x: random_rational(rng, 8)}
            clause_holds = any(a.evaluate(point) for a in clause)
            assert clause_holds == all(e.holds_at(point) for e in ents)


class TestClassify:
    def test_alternating_example_is_linear(self):
        f = to_cnf(parse(ALTERNATING_LINEAR))
        uf = skolemize(f, 1)
        for clause in uf.clauses:
            for e in clause_to_entailments(clause):
                assert classify(e) is TheoremCase.FARKAS_LINEAR

    def test_linear_hyp_polynomial_conclusion(self):
        e = PolynomialEntailment(
            (SignedConstraint(X, False), SignedConstraint(ONE.sub(X), False)),
            SignedConstraint(ONE.sub(X.mul(X)), False))
        assert classify(e) is TheoremCase.HANDELMAN_LINEAR_HYP

    def test_nonlinear_hypothesis_selects_sos(self):
        f = to_cnf(parse(DISC_PARABOLA))
        uf = skolemize(f, 2)
        cases = [classify(e) for clause in uf.clauses
                 for e in clause_to_entailments(clause)]
        assert TheoremCase.PUTINAR_GENERAL in cases

    def test_total_and_deterministic(self):
        rng = random.Random(107)
        from util import random_template
        for _ in range(100):
            hyps = tuple(SignedConstraint(random_template(rng, 3), rng.random() < 0.5)
                         for _ in range(rng.randint(1, 3)))
            e = PolynomialEntailment(hyps, SignedConstraint(random_template(rng, 3), False))
            assert classify(e) is classify(e)
            assert classify(e) in TheoremCase
