"""Parsing, CNF conversion, and negation of prenex formulas."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from skolemqe.errors import (FreeVariable, NotPrenex, ParseError,
                             SizeLimitExceeded, UnsupportedTheory)
from skolemqe.formula import (And, Atom, Or, Quantifier, Relation,
                              evaluate_node, negate, to_cnf)
from skolemqe.parser import (InputFormat, formula_to_native, parse,
                             poly_to_infix, poly_to_native)
from skolemqe.poly import Monomial, TemplatePolynomial, program_var

from util import random_rational

# Alternating-quantifier linear example used throughout the suite.
ALTERNATING_LINEAR = """
(formula
  (prefix (forall x1) (exists x2) (exists x3) (forall x4))
  (matrix (and (or (< (- x4 1) x3) (<= x2 x4))
               (or (> x4 x2) (>= x3 x1)))))
"""

# Disc-versus-parabola example needing a quadratic witness.
DISC_PARABOLA = """
(formula
  (prefix (forall x1) (forall x2) (exists x3))
  (matrix (and (or (> (- (+ (* x1 x1) (* x2 x2)) 1) 0) (< x1 10))
               (or (< x1 0) (> x3 (* x1 x1))))))
"""


def assignments(f, rng, n):
    variables = f.variables()
    for _ in range(n):
        yield {v: random_rational(rng, 8) for v in variables}


class TestParseNative:
    def test_alternating_example_shape(self):
        f = parse(ALTERNATING_LINEAR)
        kinds = [q for q, _ in f.prefix]
        assert kinds == [Quantifier.FORALL, Quantifier.EXISTS,
                         Quantifier.EXISTS, Quantifier.FORALL]
        g = to_cnf(f)
        assert len(g.cnf) == 2
        assert all(len(clause) == 2 for clause in g.cnf)

    def test_canonical_atom_orientation(self):
        f = to_cnf(parse(ALTERNATING_LINEAR))
        first = f.cnf[0][0]
        # x4 - 1 < x3 is stored as x3 + 1 - x4 > 0
        x1, x3, x4 = (program_var(n) for n in ("x1", "x3", "x4"))
        expected = (TemplatePolynomial.var(x3).add(TemplatePolynomial.const(1))
                    .sub(TemplatePolynomial.var(x4)))
        assert first == Atom(expected, Relation.GT)

    def test_reflexive_ge_becomes_zero(self):
        f = parse("(assert (forall ((x Real)) (>= x x)))", InputFormat.SMTLIB2)
        assert f.prefix == ((Quantifier.FORALL, program_var("x")),)
        assert isinstance(f.matrix, Atom)
        assert f.matrix.poly.is_zero()
        assert f.matrix.rel is Relation.GE

    def test_disequality_splits(self):
        f = parse("(formula (prefix (forall x)) (matrix (!= x 1)))")
        g = to_cnf(f)
        assert len(g.cnf) == 1
        clause = g.cnf[0]
        assert len(clause) == 2
        assert all(a.rel is Relation.GT for a in clause)
        polys = {str(a.poly) for a in clause}
        assert polys == {"1 - x", "-1 + x"}

    def test_rational_and_decimal_literals(self):
        f = parse("(formula (prefix (forall x)) (matrix (> (+ x 3/4 1.25) 0)))")
        const = f.matrix.poly.coefficient(Monomial.one()).const_value()
        assert const == Fraction(2)

    def test_not_is_pushed_to_atoms(self):
        f = parse("(formula (prefix (forall x)) (matrix (not (< x 0))))")
        assert isinstance(f.matrix, Atom)
        assert f.matrix.rel is Relation.GE

    def test_errors(self):
        with pytest.raises(FreeVariable):
            parse("(formula (prefix (forall x)) (matrix (> y 0)))")
        with pytest.raises(ParseError):
            parse("(formula (prefix (forall x)) (matrix (> x 0))")
        with pytest.raises(NotPrenex):
            parse("(formula (prefix (forall x)) (matrix (and (> x 0) (forall y))))")
        with pytest.raises(UnsupportedTheory):
            parse("(formula (prefix (forall x)) (matrix (> (sin x) 0)))")
        with pytest.raises(ParseError):
            parse("(formula (prefix (forall x) (forall x)) (matrix (> x 0)))")


class TestParseSmt2:
    def test_nested_binders(self):
        text = """
        (set-logic LRA)
        (assert (forall ((a Real) (b Real)) (exists ((c Real))
            (and (<= a c) (<= c b)))))
        (check-sat)
        """
        f = parse(text, InputFormat.SMTLIB2)
        assert [q for q, _ in f.prefix] == [Quantifier.FORALL, Quantifier.FORALL,
                                            Quantifier.EXISTS]

    def test_division_by_constant_ok(self):
        f = parse("(assert (forall ((x Real)) (> (/ x 2) 0)))", InputFormat.SMTLIB2)
        coeff = f.matrix.poly.coefficient(Monomial.of(program_var("x")))
        assert coeff.const_value() == Fraction(1, 2)

    def test_division_by_variable_rejected(self):
        with pytest.raises(UnsupportedTheory):
            parse("(assert (forall ((x Real)) (> (/ 2 x) 0)))", InputFormat.SMTLIB2)

    def test_free_constant_rejected(self):
        text = "(declare-const k Real) (assert (forall ((x Real)) (> (+ x k) 0)))"
        with pytest.raises(FreeVariable):
            parse(text, InputFormat.SMTLIB2)

    def test_implication_and_let(self):
        text = """
        (assert (forall ((x Real))
          (=> (> x 0) (let ((y (* 2 x))) (> y 0)))))
        """
        f = parse(text, InputFormat.SMTLIB2)
        rng = random.Random(1)
        for point in assignments(f, rng, 50):
            x = point[program_var("x")]
            assert evaluate_node(f.matrix, point) == ((not x > 0) or 2 * x > 0)

    def test_quantifier_below_connective(self):
        with pytest.raises(NotPrenex):
            parse("(assert (not (forall ((x Real)) (> x 0))))", InputFormat.SMTLIB2)


class TestToCnf:
    def test_conjunction(self):
        f = parse("(formula (prefix (forall x)) (matrix (and (> x 0) (> x 1))))")
        g = to_cnf(f)
        assert [len(c) for c in g.cnf] == [1, 1]

    def test_distribution(self):
        f = parse("(formula (prefix (forall x) (forall y) (forall z))"
                  " (matrix (or (and (> x 0) (> y 0)) (> z 0))))")
        g = to_cnf(f)
        assert [len(c) for c in g.cnf] == [2, 2]

    def test_already_cnf_unchanged(self):
        f = to_cnf(parse(ALTERNATING_LINEAR))
        assert len(f.cnf) == 2 and all(len(c) == 2 for c in f.cnf)

    def test_truth_preserved_on_samples(self):
        rng = random.Random(5)
        texts = [ALTERNATING_LINEAR, DISC_PARABOLA,
                 "(formula (prefix (forall x) (forall y))"
                 " (matrix (or (and (> x 0) (= y 0)) (and (< x 1) (!= y 2)))))"]
        for text in texts:
            f = parse(text)
            g = to_cnf(f)
            from skolemqe.formula import cnf_node
            clause_tree = cnf_node(g)
            for point in assignments(f, rng, 200):
                assert evaluate_node(f.matrix, point) == evaluate_node(clause_tree, point)

    def test_size_limit(self):
        # (a1&b1)|(a2&b2)|... distributes to 2^n clauses
        parts = " ".join(
            f"(and (> x{i} 0) (> x{i} 1))" for i in range(1, 16))
        prefix = " ".join(f"(forall x{i})" for i in range(1, 16))
        f = parse(f"(formula (prefix {prefix}) (matrix (or {parts})))")
        with pytest.raises(SizeLimitExceeded):
            to_cnf(f, max_clauses=1000)


class TestNegate:
    def test_forall_nonneg(self):
        f = parse("(formula (prefix (forall x)) (matrix (>= x 0)))")
        g = negate(f)
        assert g.prefix[0][0] is Quantifier.EXISTS
        assert isinstance(g.matrix, Atom)
        assert g.matrix.rel is Relation.GT
        assert str(g.matrix.poly) == "-x"

    def test_double_negation_sampled(self):
        rng = random.Random(9)
        f = parse(ALTERNATING_LINEAR)
        h = negate(negate(f))
        assert [q for q, _ in h.prefix] == [q for q, _ in f.prefix]
        for point in assignments(f, rng, 100):
            assert evaluate_node(f.matrix, point) == evaluate_node(h.matrix, point)

    def test_negation_complements_truth(self):
        rng = random.Random(13)
        for text in [ALTERNATING_LINEAR, DISC_PARABOLA]:
            f = parse(text)
            g = negate(f)
            assert [q for q, _ in g.prefix] == [
                Quantifier.EXISTS if q is Quantifier.FORALL else Quantifier.FORALL
                for q, _ in f.prefix]
            assert g.cnf is not None
            for point in assignments(f, rng, 200):
                assert evaluate_node(f.matrix, point) != evaluate_node(g.matrix, point)

    def test_strictness_flips_exactly(self):
        f = parse("(formula (prefix (forall x)) (matrix (> x 0)))")
        g = negate(f)
        assert g.matrix.rel is Relation.GE
        f2 = parse("(formula (prefix (forall x)) (matrix (= x 0)))")
        g2 = negate(f2)
        assert isinstance(g2.matrix, Or)
        assert all(a.rel is Relation.GT for a in g2.matrix.children)


class TestPrinting:
    CORPUS = [
        ALTERNATING_LINEAR,
        DISC_PARABOLA,
        "(formula (prefix (forall x)) (matrix (> x 0)))",
        "(formula (prefix (forall x) (exists y)) (matrix (> y x)))",
        "(formula (prefix (forall x)) (matrix (or (= x 0) (> (* 2/3 x x) 1))))",
    ]

    def test_parse_print_roundtrip(self):
        for text in self.CORPUS:
            f = parse(text)
            printed = formula_to_native(f)
            again = parse(printed)
            assert again.prefix == f.prefix
            assert again.matrix == f.matrix

    def test_poly_printers(self):
        f = parse("(formula (prefix (forall x1)) (matrix (> (+ 1 x1) 0)))")
        p = f.matrix.poly
        assert poly_to_infix(p) == "1 + x1"
        assert poly_to_native(p) == "(+ 1 x1)"
