"""Independent verification of extracted Skolem witnesses.

Two tiers: randomized sampling (fast regression, boundary-biased) and a
solver check that asserts the negation of the substituted matrix, where an
``unsat`` answer is a sound proof that the witness works everywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .backend import Model, SolverConfig, parse_model, run_script
from .errors import MissingBinding
from .formula import (BoolNode, QuantifiedFormula, evaluate_node, node_atoms,
                      substitute_node)
from .poly import CoeffPoly, TemplatePolynomial, VarId
from .skolemize import SkolemTemplate
from .smtlib import Logic, negation_query_script


class VerifyMode(Enum):
    SAMPLING = "sample"
    SOLVER_CHECK = "solver"
    NONE = "none"


class Verdict(Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SkolemWitness:
    """Concrete rational-coefficient polynomial per existential variable."""

    functions: dict[VarId, TemplatePolynomial]

    def __post_init__(self):
        for v, body in self.functions.items():
            if not body.is_ground():
                raise ValueError(f"witness for {v.name} is not ground")


@dataclass(frozen=True)
class VerificationReport:
    mode: VerifyMode
    samples_tried: int
    counterexample: dict[VarId, Fraction] | None
    verdict: Verdict
    detail: str = ""

    def to_json_dict(self) -> dict:
        out = {"mode": self.mode.value, "verdict": self.verdict.value,
               "samples": self.samples_tried}
        if self.counterexample is not None:
            out["counterexample"] = {v.name: str(q)
                                     for v, q in self.counterexample.items()}
        if self.detail:
            out["detail"] = self.detail
        return out


def extract_witness(templates: dict[VarId, SkolemTemplate],
                    model: Model) -> SkolemWitness:
    """Instantiate template bodies at the model's unknown values."""
    functions: dict[VarId, TemplatePolynomial] = {}
    for target, template in templates.items():
        for u in template.unknowns:
            if u not in model.assignment:
                raise MissingBinding(f"model does not bind {u.name}")
        terms = []
        for mono, coeff in template.body.terms:
            value = coeff.evaluate(model.assignment)
            if value != 0:
                terms.append((mono, CoeffPoly.const(value)))
        functions[target] = TemplatePolynomial.from_terms(terms)
    return SkolemWitness(functions)


def substituted_matrix(f: QuantifiedFormula, witness: SkolemWitness) -> BoolNode:
    missing = [v.name for v in f.existentials() if v not in witness.functions]
    if missing:
        raise MissingBinding(f"witness missing {', '.join(missing)}")
    return substitute_node(f.matrix, witness.functions)


def _sample_value(rng: random.Random) -> Fraction:
    mode = rng.randrange(3)
    if mode == 0:
        return Fraction(rng.randint(-5, 5))
    scale = 2 ** rng.randint(0, 4)
    return Fraction(rng.randint(-10 * scale, 10 * scale), scale)


def _boundary_points(matrix: BoolNode, universals, base, rng):
    """Points near atom zero-sets: solve one linear occurrence exactly."""
    atoms = list(node_atoms(matrix))
    if not atoms:
        return
    atom = rng.choice(atoms)
    v = None
    for candidate in universals:
        if atom.poly.degree and candidate in atom.poly.program_variables():
            v = candidate
            break
    if v is None:
        return
    # isolate: poly = c*v + rest when v occurs linearly with constant coeff
    c = Fraction(0)
    rest = TemplatePolynomial.zero()
    for mono, coeff in atom.poly.terms:
        e = mono.exponent(v)
        if e == 0:
            rest = rest.add(TemplatePolynomial.monomial(mono, coeff))
        elif e == 1 and len(mono.powers) == 1:
            c += coeff.const_value()
        else:
            return
    if c == 0:
        return
    others = {w: q for w, q in base.items() if w != v}
    try:
        root = -rest.evaluate(others) / c
    except Exception:
        return
    for offset in (Fraction(0), Fraction(1, 8), Fraction(-1, 8)):
        point = dict(others)
        point[v] = root + offset
        yield point


def verify_sampling(f: QuantifiedFormula, witness: SkolemWitness, samples: int,
                    seed: int = 0) -> VerificationReport:
    """Evaluate the substituted matrix at mixed-distribution sample points;
    the first violation refutes with a counterexample."""
    matrix = substituted_matrix(f, witness)
    universals = f.universals()
    rng = random.Random(seed)
    tried = 0
    queue: list[dict[VarId, Fraction]] = []
    if not universals:
        queue.append({})
        samples = 1
    while tried < samples:
        if queue:
            point = queue.pop()
        else:
            point = {v: _sample_value(rng) for v in universals}
            if rng.random() < 0.3:
                queue.extend(_boundary_points(matrix, universals, point, rng) or [])
        tried += 1
        if not evaluate_node(matrix, point):
            return VerificationReport(VerifyMode.SAMPLING, tried, point,
                                      Verdict.REFUTED)
        if not universals:
            break
    return VerificationReport(VerifyMode.SAMPLING, tried, None, Verdict.VERIFIED)


def verify_solver(f: QuantifiedFormula, witness: SkolemWitness,
                  cfg: SolverConfig) -> VerificationReport:
    """Prove the substituted matrix valid by refuting its negation."""
    matrix = substituted_matrix(f, witness)
    universals = f.universals()
    degree = max((a.poly.degree for a in node_atoms(matrix)), default=0)
    logic = Logic.QF_LRA if degree <= 1 else Logic.QF_NRA
    script = negation_query_script(matrix, universals, logic)
    status, body = run_script(script, cfg)
    if status == "unsat":
        return VerificationReport(VerifyMode.SOLVER_CHECK, 0, None,
                                  Verdict.VERIFIED)
    if status == "sat":
        try:
            model = parse_model(body, set(universals))
        except Exception as exc:
            return VerificationReport(VerifyMode.SOLVER_CHECK, 0, None,
                                      Verdict.INCONCLUSIVE,
                                      f"counterexample unparseable: {exc}")
        point = {v: model.assignment[v] for v in universals}
        if evaluate_node(matrix, point):
            return VerificationReport(VerifyMode.SOLVER_CHECK, 0, None,
                                      Verdict.INCONCLUSIVE,
                                      "solver counterexample does not re-check")
        return VerificationReport(VerifyMode.SOLVER_CHECK, 0, point,
                                  Verdict.REFUTED)
    return VerificationReport(VerifyMode.SOLVER_CHECK, 0, None,
                              Verdict.INCONCLUSIVE, f"solver answered {status}")
