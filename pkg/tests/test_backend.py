"""Script emission, child-process driving, model parsing, re-validation."""

from __future__ import annotations

import sys
from fractions import Fraction

import pytest

from skolemqe.backend import (Model, SolverConfig, default_command, emit,
                              parse_model, pick_logic, run_script, solve)
from skolemqe.encoders import ConstraintSystem
from skolemqe.errors import (InvalidModel, IrrationalModel, ModelParseError,
                             SolverCrash)
from skolemqe.poly import CoeffPoly, Monomial, unknown_var
from skolemqe.smtlib import Logic, rational_smt

F = Fraction
c = unknown_var("c")
d = unknown_var("d")

BUNDLED = (sys.executable, "-m", "skolemqe.minismt")


def cfg(timeout=30.0):
    return SolverConfig(command=BUNDLED, timeout=timeout)


def var(v):
    return CoeffPoly.var(v)


def const(q):
    return CoeffPoly.const(q)


class TestEmit:
    def test_empty_system_is_sat(self):
        system = ConstraintSystem()
        script = emit(system, Logic.QF_LRA)
        assert "(check-sat)" in script
        result = solve(system, cfg())
        assert result.status == "sat"

    def test_single_equality(self):
        system = ConstraintSystem((var(c).sub(const(1)),), ())
        script = emit(system, Logic.QF_LRA)
        assert "(declare-const c Real)" in script
        assert "(assert (= (+ (- 1) c) 0))" in script
        result = solve(system, cfg())
        assert result.status == "sat"
        assert result.model.assignment[c] == 1

    def test_deterministic(self):
        system = ConstraintSystem(
            (var(c).mul(var(d)).sub(const(2)),),
            ((var(c), False), (var(d), True)))
        assert emit(system, Logic.QF_NRA) == emit(system, Logic.QF_NRA)

    def test_rational_formatting(self):
        assert rational_smt(F(35, 4)) == "(/ 35 4)"
        assert rational_smt(F(-3)) == "(- 3)"
        assert rational_smt(F(-1, 2)) == "(- (/ 1 2))"
        assert rational_smt(F(7)) == "7"


class TestParseModel:
    def test_decimal_is_exact(self):
        model = parse_model("(model (define-fun c () Real 1.0))", {c})
        assert model.assignment[c] == 1

    def test_fraction(self):
        model = parse_model("(model (define-fun c () Real (/ 35 4)))", {c})
        assert model.assignment[c] == F(35, 4)

    def test_negative_fraction(self):
        model = parse_model("((define-fun c () Real (- (/ 1 2))))", {c})
        assert model.assignment[c] == F(-1, 2)

    def test_omitted_unknown_defaults_to_zero_with_flag(self):
        model = parse_model("(model (define-fun c () Real 3))", {c, d})
        assert model.assignment[d] == 0
        assert model.defaulted == frozenset({d})

    def test_root_obj_is_irrational(self):
        text = "(model (define-fun c () Real (root-obj (+ (^ x 2) (- 2)) 2)))"
        with pytest.raises(IrrationalModel):
            parse_model(text, {c})

    def test_garbage_raises(self):
        with pytest.raises(ModelParseError):
            parse_model("(model (define-fun c () Real hello))", {c})


class TestSolve:
    def test_contradiction_unsat(self):
        system = ConstraintSystem((), ((var(c), True), (var(c).neg(), True)))
        assert solve(system, cfg()).status == "unsat"

    def test_sat_model_revalidated(self):
        system = ConstraintSystem(
            (var(c).add(var(d)).sub(const(3)),),
            ((var(c), False), (var(d), False)))
        result = solve(system, cfg())
        assert result.status == "sat"
        assert result.model.assignment[c] + result.model.assignment[d] == 3

    def test_irrational_requirement_is_unknown(self):
        system = ConstraintSystem((var(c).mul(var(c)).sub(const(2)),), ())
        result = solve(system, cfg())
        assert result.status == "unknown"

    def test_timeout_kills_child(self):
        sleeper = (sys.executable, "-c", "import time; time.sleep(30)")
        system = ConstraintSystem((var(c),), ())
        result = solve(system, SolverConfig(command=sleeper, timeout=0.3))
        assert result.status == "timeout"

    def test_crash_surfaces(self):
        crasher = (sys.executable, "-c", "import sys; sys.exit(7)")
        system = ConstraintSystem((var(c),), ())
        with pytest.raises(SolverCrash):
            solve(system, SolverConfig(command=crasher, timeout=5.0))

    def test_lying_solver_caught_by_revalidation(self, tmp_path):
        liar = tmp_path / "liar.py"
        liar.write_text(
            "print('sat')\nprint('(model (define-fun c () Real 5))')\n")
        system = ConstraintSystem((var(c).sub(const(1)),), ())
        with pytest.raises(InvalidModel):
            solve(system, SolverConfig(command=(sys.executable, str(liar)),
                                       timeout=5.0))

    def test_logic_pick(self):
        linear = ConstraintSystem((var(c).sub(const(1)),), ())
        assert pick_logic(linear) is Logic.QF_LRA
        quadratic = ConstraintSystem((var(c).mul(var(c)),), ())
        assert pick_logic(quadratic) is Logic.QF_NRA


class TestDefaultCommand:
    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("SKOLEM_QE_SOLVER", "mysolver --flag")
        assert default_command() == ("mysolver", "--flag")

    def test_fallback_is_bundled(self, monkeypatch):
        monkeypatch.delenv("SKOLEM_QE_SOLVER", raising=False)
        monkeypatch.setattr("shutil.which", lambda name: None)
        assert default_command() == (sys.executable, "-m", "skolemqe.minismt")
