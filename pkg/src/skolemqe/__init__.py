"""Satisfiability of quantified real-arithmetic formulas via polynomial
witness templates and algebraic certificate encodings."""

from .backend import Model, SolverConfig, SolveResult, solve
from .encoders import ConstraintSystem, EncoderConfig, encode
from .entailment import (ConclusionStrategy, PolynomialEntailment,
                         SignedConstraint, TheoremCase, classify,
                         clause_to_entailments)
from .formula import QuantifiedFormula, Quantifier, Relation, negate, to_cnf
from .orchestrator import Outcome, RunConfig, run
from .parser import InputFormat, parse
from .poly import CoeffPoly, Monomial, TemplatePolynomial, VarId
from .skolemize import monomials_up_to_degree, skolemize
from .verify import (SkolemWitness, VerificationReport, VerifyMode,
                     extract_witness, verify_sampling, verify_solver)

__version__ = "0.1.0"

__all__ = [
    "ConclusionStrategy", "ConstraintSystem", "CoeffPoly", "EncoderConfig",
    "InputFormat", "Model", "Monomial", "Outcome", "PolynomialEntailment",
    "QuantifiedFormula", "Quantifier", "Relation", "RunConfig",
    "SignedConstraint", "SkolemWitness", "SolveResult", "SolverConfig",
    "TemplatePolynomial", "TheoremCase", "VarId", "VerificationReport",
    "VerifyMode", "classify", "clause_to_entailments", "encode",
    "extract_witness", "monomials_up_to_degree", "negate", "parse", "run",
    "skolemize", "solve", "to_cnf", "verify_sampling", "verify_solver",
]
