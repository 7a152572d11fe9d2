"""End-to-end driver: degree schedule, conclusion retries, negation route.

For each template degree the pipeline eliminates existentials, rewrites
every clause into entailments, encodes them, and hands the conjoined
system to the solver.  A satisfiable system yields a witness, which is
verified before the verdict is reported.  When the whole schedule fails
on the input formula the same schedule runs on its negation; success
there proves unsatisfiability (with a witness for the negation).  An
unsatisfiable certificate system proves nothing, so everything else is
``unknown``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

from .backend import SolverConfig, pick_logic, solve
from .encoders import ConstraintSystem, EncoderConfig, UnknownFactory, encode
from .entailment import ConclusionStrategy, entailment_groups
from .errors import SizeLimitExceeded, SkolemQeError, SoundnessError
from .formula import QuantifiedFormula, negate, to_cnf
from .parser import poly_to_infix
from .skolemize import skolemize
from .verify import (SkolemWitness, Verdict, VerificationReport, VerifyMode,
                     extract_witness, verify_sampling, verify_solver)

TRY_EACH_COMBO_LIMIT = 32


@dataclass(frozen=True)
class RunConfig:
    degree_schedule: tuple[int, ...] = (0, 1, 2)
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    conclusion_strategy: ConclusionStrategy = ConclusionStrategy.LAST_LITERAL
    try_negation: bool = True
    verify_mode: VerifyMode = VerifyMode.SOLVER_CHECK
    solver: SolverConfig = field(default_factory=SolverConfig)
    total_timeout: float | None = None
    sample_count: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not self.degree_schedule:
            raise ValueError("degree schedule must be nonempty")
        if list(self.degree_schedule) != sorted(self.degree_schedule):
            raise ValueError("degree schedule must be ascending")


@dataclass
class Outcome:
    verdict: str  # "sat" | "unsat" | "unknown"
    witness: SkolemWitness | None = None
    report: VerificationReport | None = None
    degree: int | None = None
    route: str = "formula"  # which formula the witness belongs to
    stats: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {"verdict": self.verdict, "witness": None, "degree": self.degree,
               "verification": None, "stats": self.stats}
        if self.witness is not None:
            out["witness"] = {v.name: poly_to_infix(p)
                              for v, p in sorted(self.witness.functions.items(),
                                                 key=lambda kv: kv[0].sort_key())}
            out["route"] = self.route
        if self.report is not None:
            out["verification"] = self.report.to_json_dict()
        return out


class _Clock:
    def __init__(self, budget: float | None):
        self.start = time.monotonic()
        self.budget = budget

    def expired(self) -> bool:
        return self.budget is not None and self.elapsed() > self.budget

    def elapsed(self) -> float:
        return time.monotonic() - self.start


def run(f: QuantifiedFormula, cfg: RunConfig = RunConfig()) -> Outcome:
    """Decide the formula within the configured schedule."""
    clock = _Clock(cfg.total_timeout)
    stats: dict = {"attempts": [], "timings": {}}
    f = to_cnf(f)
    outcome = _run_schedule(f, cfg, clock, stats, route="formula")
    if outcome is not None:
        outcome.verdict = "sat"
        outcome.stats = stats
        return outcome
    if cfg.try_negation and not clock.expired():
        try:
            negated = negate(f)
        except SizeLimitExceeded as exc:
            stats["negation_skipped"] = str(exc)
            negated = None
        if negated is not None:
            outcome = _run_schedule(negated, cfg, clock, stats, route="negation")
            if outcome is not None:
                outcome.verdict = "unsat"
                outcome.stats = stats
                return outcome
    stats["timings"]["total_s"] = clock.elapsed()
    return Outcome("unknown", stats=stats)


def _run_schedule(f: QuantifiedFormula, cfg: RunConfig, clock: _Clock,
                  stats: dict, route: str) -> Outcome | None:
    strategies = ([cfg.conclusion_strategy]
                  if cfg.conclusion_strategy is ConclusionStrategy.TRY_EACH
                  else [ConclusionStrategy.LAST_LITERAL, ConclusionStrategy.TRY_EACH])
    for degree in cfg.degree_schedule:
        for strategy in strategies:
            if clock.expired():
                return None
            outcome = _attempt(f, degree, strategy, cfg, clock, stats, route)
            if outcome is not None:
                return outcome
    return None


def _attempt(f: QuantifiedFormula, degree: int, strategy: ConclusionStrategy,
             cfg: RunConfig, clock: _Clock, stats: dict, route: str,
             ) -> Outcome | None:
    record = {"route": route, "degree": degree, "strategy": strategy.value}
    stats["attempts"].append(record)
    t0 = time.monotonic()
    universal = skolemize(f, degree)
    record["skolemize_s"] = time.monotonic() - t0
    try:
        groups_per_clause = [entailment_groups(clause, strategy)
                             for clause in universal.clauses]
    except SkolemQeError as exc:
        record["error"] = str(exc)
        return None
    combos = _combinations([len(g) for g in groups_per_clause])
    record["combinations"] = len(combos)
    for combo in combos:
        if clock.expired():
            return None
        entailments = []
        for groups, choice in zip(groups_per_clause, combo):
            entailments.extend(groups[choice])
        t1 = time.monotonic()
        try:
            systems = []
            for index, e in enumerate(entailments):
                namer = UnknownFactory(f"e{index}_")
                systems.append(encode(e, cfg.encoder, namer))
            system = ConstraintSystem.conjunction(systems)
        except SkolemQeError as exc:
            record["error"] = str(exc)
            continue
        record["encode_s"] = record.get("encode_s", 0.0) + time.monotonic() - t1
        record["equalities"] = len(system.equalities)
        record["inequalities"] = len(system.inequalities)
        record["unknowns"] = len(system.unknowns())
        solver_cfg = _budgeted(cfg.solver, clock)
        solver_cfg = replace(solver_cfg, logic=pick_logic(system))
        t2 = time.monotonic()
        result = solve(system, solver_cfg)
        record["solve_s"] = record.get("solve_s", 0.0) + time.monotonic() - t2
        record["solver_status"] = result.status
        if result.status != "sat":
            continue
        witness = extract_witness(universal.templates, result.model)
        t3 = time.monotonic()
        report = _verify(f, witness, cfg, clock)
        record["verify_s"] = time.monotonic() - t3
        if report is not None and report.verdict is Verdict.REFUTED:
            raise SoundnessError(
                "verified-refuted witness: encoder or solver bug",
                payload={"witness": {v.name: str(p) for v, p in
                                     witness.functions.items()},
                         "counterexample": {v.name: str(q) for v, q in
                                            (report.counterexample or {}).items()},
                         "route": route, "degree": degree})
        return Outcome("sat", witness=witness, report=report, degree=degree,
                       route=route)
    return None


def _verify(f, witness, cfg: RunConfig, clock: _Clock):
    if cfg.verify_mode is VerifyMode.NONE:
        return None
    if cfg.verify_mode is VerifyMode.SAMPLING:
        return verify_sampling(f, witness, cfg.sample_count, cfg.seed)
    return verify_solver(f, witness, _budgeted(cfg.solver, clock))


def _budgeted(solver: SolverConfig, clock: _Clock) -> SolverConfig:
    if clock.budget is None:
        return solver
    remaining = max(0.5, clock.budget - clock.elapsed())
    return replace(solver, timeout=min(solver.timeout, remaining))


def _combinations(sizes: list[int]) -> list[tuple[int, ...]]:
    combos: list[tuple[int, ...]] = [()]
    for size in sizes:
        combos = [c + (i,) for c in combos for i in range(size)]
        if len(combos) > TRY_EACH_COMBO_LIMIT:
            combos = combos[:TRY_EACH_COMBO_LIMIT]
    return combos
