"""Bundled solver: simplex, propagation, refutations, model search."""

from __future__ import annotations

import random
from fractions import Fraction

from skolemqe.minismt.cli import run
from skolemqe.minismt.reader import read_script
from skolemqe.minismt.simplex import feasible_point, solve_lp
from skolemqe.minismt.solver import solve_problem

F = Fraction


def rows(*items):
    return [({k: F(c) for k, c in coeffs.items()}, F(const))
            for coeffs, const in items]


class TestSimplex:
    def test_feasible_equalities(self):
        # x + y = 2, x - y = 0
        point = feasible_point(rows(({"x": 1, "y": 1}, -2), ({"x": 1, "y": -1}, 0)),
                               [], [])
        assert point == {"x": F(1), "y": F(1)}

    def test_infeasible(self):
        point = feasible_point(rows(({"x": 1}, 0)), rows(({"x": 1}, -1)), [])
        assert point is None

    def test_strict_feasible(self):
        point = feasible_point([], [], rows(({"x": 1}, -3)))
        assert point is not None
        assert point["x"] > 3

    def test_strict_boundary_only_is_infeasible(self):
        # x >= 0 and -x >= 0 force x = 0, so x > 0 has no solution
        point = feasible_point([], rows(({"x": 1}, 0), ({"x": -1}, 0)),
                               rows(({"x": 1}, 0)))
        assert point is None

    def test_objective(self):
        # maximise x subject to x <= 3, x >= -1
        result = solve_lp([], rows(({"x": -1}, 3), ({"x": 1}, 1)),
                          objective=({"x": F(1)}, F(0)), maximize=True)
        assert result.status == "optimal"
        assert result.objective == 3

    def test_unbounded(self):
        result = solve_lp([], rows(({"x": 1}, 0)),
                          objective=({"x": F(1)}, F(0)), maximize=True)
        assert result.status == "unbounded"

    def test_negative_values_reachable(self):
        point = feasible_point(rows(({"x": 1}, 5)), [], [])
        assert point == {"x": F(-5)}


def solve_text(text, timeout=30.0, seed=0):
    return solve_problem(read_script(text), timeout, seed)


class TestLinearScripts:
    def test_trivial_sat(self):
        status, model = solve_text("(set-logic QF_LRA)(check-sat)")
        assert status == "sat"

    def test_simple_equality(self):
        status, model = solve_text(
            "(declare-const c Real)(assert (= (- c 1) 0))(check-sat)")
        assert status == "sat"
        assert list(model.values()) == [F(1)]

    def test_contradictory_strict(self):
        status, _ = solve_text(
            "(declare-const c Real)(assert (> c 0))(assert (> (- 0 c) 0))")
        assert status == "unsat"

    def test_boolean_structure(self):
        status, model = solve_text(
            "(declare-const a Real)(declare-const b Real)"
            "(assert (or (and (= a 1) (= b 2)) (and (= a 2) (= b 1))))"
            "(assert (not (= a 1)))")
        assert status == "sat"
        values = sorted(model.values())
        assert values == [F(1), F(2)]

    def test_distinct(self):
        status, _ = solve_text(
            "(declare-const a Real)(assert (distinct a a))")
        assert status == "unsat"


class TestNonlinearScripts:
    def test_square_equals_negative_unsat(self):
        status, _ = solve_text(
            "(declare-const l Real)(assert (= (* l l) (- 1)))")
        assert status == "unsat"

    def test_square_equals_two_unknown(self):
        # real solutions exist but no rational ones; a sound solver must
        # not answer unsat, and this one cannot produce a rational model
        status, _ = solve_text(
            "(declare-const c Real)(assert (= (* c c) 2))")
        assert status == "unknown"

    def test_rational_quadratic_roots(self):
        status, model = solve_text(
            "(declare-const c Real)(assert (= (* 4 c c) 9))(assert (> c 0))")
        assert status == "sat"
        assert list(model.values()) == [F(3, 2)]

    def test_interval_refutation(self):
        status, _ = solve_text(
            "(declare-const x Real)(declare-const y Real)"
            "(assert (>= x 10))(assert (<= (+ (* x x) (* y y)) 1))")
        assert status == "unsat"

    def test_relaxation_refutation(self):
        # h >= 0 together with 3 + h + h^2 < 0 is impossible
        status, _ = solve_text(
            "(declare-const u Real)"
            "(assert (>= u 0))"
            "(assert (< (+ 3 u (* u u)) 0))")
        assert status == "unsat"

    def test_bilinear_alternation(self):
        # y * c = 4, y >= 0, c <= 3
        status, model = solve_text(
            "(declare-const y Real)(declare-const c Real)"
            "(assert (= (* y c) 4))(assert (>= y 0))(assert (<= c 3))")
        assert status == "sat"

    def test_sum_of_squares_forcing(self):
        status, model = solve_text(
            "(declare-const a Real)(declare-const b Real)"
            "(assert (= (+ (* a a) (* b b)) 0))")
        assert status == "sat"
        assert set(model.values()) == {F(0)}

    def test_product_branching(self):
        status, model = solve_text(
            "(declare-const a Real)(declare-const b Real)"
            "(assert (= (* a b) 0))(assert (= (+ a b) 5))")
        assert status == "sat"

    def test_quadratic_with_freedom(self):
        # (x - 1/2)^2 + y^2 = z with z free: needs the numeric stage
        status, model = solve_text(
            "(declare-const x Real)(declare-const y Real)(declare-const z Real)"
            "(assert (= (+ (* x x) (- (* y y) (* x 1)) (/ 1 4)) z))"
            "(assert (>= z 1))(assert (<= z 2))")
        assert status == "sat"


class TestGoldenSystems:
    def test_alternating_linear_certificate_system(self):
        # the bilinear multiplier/template system of the linear golden run
        text = """
        (set-logic QF_NRA)
        (declare-const c_2_1 Real) (declare-const c_2_2 Real)
        (declare-const c_3_1 Real) (declare-const c_3_2 Real)
        (declare-const y0 Real) (declare-const y1 Real)
        (declare-const z0 Real) (declare-const z1 Real)
        (assert (= (- (- 0 c_2_2) (* y1 (- 0 c_3_2))) 0))
        (assert (= (- 1 y1) 0))
        (assert (= (- (- 0 c_2_1) (+ y0 (* y1 (- (- 0 1) c_3_1)))) 0))
        (assert (= (- (- c_3_2 1) (* z1 c_2_2)) 0))
        (assert (= (* z1 (- 0 1)) 0))
        (assert (= (- c_3_1 (+ z0 (* z1 c_2_1))) 0))
        (assert (>= y0 0)) (assert (>= y1 0))
        (assert (>= z0 0)) (assert (>= z1 0))
        (check-sat)
        """
        status, model = solve_text(text)
        assert status == "sat"

    def test_disc_certificate_system(self):
        # eps + h0 + h1*(1 - x1^2 - x2^2) must equal 10 - x1 coefficientwise,
        # with h0, h1 realised by lower-triangular factors over [1, x1, x2]
        def q(i, j, tag):
            # Gram entry (i,j) of tag block written through its L entries
            terms = []
            for k in range(min(i, j) + 1):
                terms.append(f"(* {tag}_{i}_{k} {tag}_{j}_{k})")
            return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"

        declares = ["(declare-const eps Real)"]
        for tag in ("a", "b"):
            for i in range(3):
                for j in range(i + 1):
                    declares.append(f"(declare-const {tag}_{i}_{j} Real)")
        equalities = [
            f"(assert (= (+ eps {q(0,0,'a')} {q(0,0,'b')}) 10))",
            f"(assert (= (+ (* 2 {q(0,1,'a')}) (* 2 {q(0,1,'b')})) (- 1)))",
            f"(assert (= (+ (* 2 {q(0,2,'a')}) (* 2 {q(0,2,'b')})) 0))",
            f"(assert (= (- (+ {q(1,1,'a')} {q(1,1,'b')}) {q(0,0,'b')}) 0))",
            f"(assert (= (+ (* 2 {q(1,2,'a')}) (* 2 {q(1,2,'b')})) 0))",
            f"(assert (= (- (+ {q(2,2,'a')} {q(2,2,'b')}) {q(0,0,'b')}) 0))",
            f"(assert (= (* 2 {q(0,1,'b')}) 0))",
            f"(assert (= (* 2 {q(0,2,'b')}) 0))",
            f"(assert (= {q(1,1,'b')} 0))",
            f"(assert (= (* 2 {q(1,2,'b')}) 0))",
            f"(assert (= {q(2,2,'b')} 0))",
            "(assert (> eps 0))",
        ]
        text = "(set-logic QF_NRA)\n" + "\n".join(declares + equalities)
        status, model = solve_text(text, timeout=60.0)
        assert status == "sat"


class TestCli:
    def test_run_sat_output(self):
        out = run("(declare-const c Real)(assert (= c 2))(check-sat)(get-model)",
                  None, 0)
        lines = out.strip().splitlines()
        assert lines[0] == "sat"
        assert "(define-fun c () Real 2)" in out

    def test_run_unsat_output(self):
        out = run("(declare-const c Real)(assert (> c 0))(assert (< c 0))",
                  None, 0)
        assert out.startswith("unsat")
