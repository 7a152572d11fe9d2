"""Child-process solver driver: emit scripts, run, parse and re-check models.

The backend is solver-agnostic: any executable accepting an SMT-LIB 2
script path as its last argument and answering ``sat``/``unsat``/``unknown``
plus a ``get-model`` block works.  Resolution order for the default
command: the SKOLEM_QE_SOLVER environment variable, a ``z3`` binary on
PATH, then the bundled fallback solver.

Every model is re-validated exactly against the emitted system before it
is returned, so soundness does not rest on trusting the child process.
"""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

from .encoders import ConstraintSystem
from .errors import (InvalidModel, IrrationalModel, ModelParseError,
                     SolverCrash)
from .poly import VarId, unknown_var
from .sexpr import Sym, read_all
from .smtlib import Logic, system_script
from .sexpr import to_text

ENV_SOLVER = "SKOLEM_QE_SOLVER"


def default_command() -> tuple[str, ...]:
    override = os.environ.get(ENV_SOLVER)
    if override:
        return tuple(shlex.split(override))
    z3 = shutil.which("z3")
    if z3:
        return (z3,)
    return (sys.executable, "-m", "skolemqe.minismt")


@dataclass(frozen=True)
class SolverConfig:
    command: tuple[str, ...] = field(default_factory=default_command)
    timeout: float = 60.0
    logic: Logic = Logic.QF_NRA

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass(frozen=True)
class Model:
    assignment: dict[VarId, Fraction]
    defaulted: frozenset[VarId] = frozenset()

    def value(self, v: VarId) -> Fraction:
        return self.assignment[v]


@dataclass(frozen=True)
class SolveResult:
    status: str  # "sat" | "unsat" | "unknown" | "timeout"
    model: Model | None = None
    diagnostic: str = ""


def emit(system: ConstraintSystem, logic: Logic) -> str:
    """Deterministic SMT-LIB script for the system (see smtlib module)."""
    return system_script(system, logic)


def run_script(script: str, cfg: SolverConfig) -> tuple[str, str]:
    """Run the child solver on the script; return (status, response body).

    The child is terminated on timeout and ("timeout", "") is returned.
    """
    with tempfile.NamedTemporaryFile("w", suffix=".smt2", delete=False) as handle:
        handle.write(script)
        path = handle.name
    try:
        try:
            proc = subprocess.run(
                list(cfg.command) + [path],
                capture_output=True, text=True, timeout=cfg.timeout)
        except subprocess.TimeoutExpired:
            return "timeout", ""
        except OSError as exc:
            raise SolverCrash(f"cannot run solver {cfg.command}: {exc}")
        lines = proc.stdout.splitlines()
        first = next((line.strip() for line in lines if line.strip()), "")
        if first in ("sat", "unsat", "unknown"):
            body = proc.stdout.split(first, 1)[1]
            return first, body
        if proc.returncode != 0:
            raise SolverCrash(
                f"solver exited with {proc.returncode}: {proc.stderr.strip()[:500]}")
        raise ModelParseError(f"unrecognised solver output: {proc.stdout[:200]!r}")
    finally:
        try:
            os.unlink(path)
        except OSError:
            pass


def _value_of(node) -> Fraction:
    if isinstance(node, Sym):
        try:
            return Fraction(node.text)
        except (ValueError, ZeroDivisionError):
            raise ModelParseError(f"unparseable model value '{node.text}'")
    if not node:
        raise ModelParseError("empty model value")
    head = node[0]
    if isinstance(head, Sym):
        op = head.text
        if op == "-" and len(node) == 2:
            return -_value_of(node[1])
        if op == "/" and len(node) == 3:
            denominator = _value_of(node[2])
            if denominator == 0:
                raise ModelParseError("division by zero in model")
            return _value_of(node[1]) / denominator
        if op in ("root-obj", "_", "root_obj"):
            raise IrrationalModel(f"algebraic model value: {to_text(node)}")
    raise ModelParseError(f"unsupported model value {to_text(node)!r}")


def parse_model(text: str, unknowns: set[VarId]) -> Model:
    """Parse a get-model response; unknowns the solver omitted default to 0
    and are flagged, so the re-validation still covers them."""
    try:
        forms = read_all(text)
    except Exception as exc:
        raise ModelParseError(f"malformed model text: {exc}")
    assignment: dict[VarId, Fraction] = {}
    names = {v.name: v for v in unknowns}

    def walk(form):
        if not isinstance(form, list) or not form:
            return
        head = form[0]
        if isinstance(head, Sym) and head.text == "model":
            for child in form[1:]:
                walk(child)
            return
        if isinstance(head, Sym) and head.text == "define-fun" and len(form) >= 5:
            name = form[1].text if isinstance(form[1], Sym) else None
            if name in names:
                assignment[names[name]] = _value_of(form[4])
            return
        for child in form:
            walk(child)

    for form in forms:
        walk(form)
    defaulted = frozenset(v for v in unknowns if v not in assignment)
    for v in defaulted:
        assignment[v] = Fraction(0)
    return Model(assignment, defaulted)


def solve(system: ConstraintSystem, cfg: SolverConfig) -> SolveResult:
    """Emit, run, parse, and exactly re-validate.

    A model that fails re-validation raises InvalidModel; irrational model
    values degrade to an ``unknown`` result with a diagnostic.
    """
    script = emit(system, cfg.logic)
    status, body = run_script(script, cfg)
    if status in ("unsat", "timeout"):
        return SolveResult(status)
    if status == "unknown":
        return SolveResult("unknown")
    try:
        model = parse_model(body, set(system.unknowns()))
    except IrrationalModel as exc:
        return SolveResult("unknown", diagnostic=str(exc))
    if not system.satisfied_by(model.assignment):
        problems = system.violations(model.assignment)
        raise InvalidModel(
            "solver model fails exact re-validation: " + "; ".join(problems[:3]))
    return SolveResult("sat", model)


def pick_logic(system: ConstraintSystem) -> Logic:
    return Logic.QF_LRA if system.max_degree() <= 1 else Logic.QF_NRA
