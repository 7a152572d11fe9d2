"""Command-line entry point.

    skolem-qe solve FILE [options]

Exit codes: 0 sat, 1 unsat, 2 unknown, 3 error.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys

from .backend import SolverConfig, default_command
from .encoders import EncoderConfig
from .entailment import ConclusionStrategy, TheoremCase
from .errors import SkolemQeError, SoundnessError
from .orchestrator import Outcome, RunConfig, run
from .parser import InputFormat, parse, sniff_format
from .verify import VerifyMode

EXIT = {"sat": 0, "unsat": 1, "unknown": 2}

_THEOREMS = {
    "auto": None,
    "farkas": TheoremCase.FARKAS_LINEAR,
    "handelman": TheoremCase.HANDELMAN_LINEAR_HYP,
    "putinar": TheoremCase.PUTINAR_GENERAL,
    "nl-handelman": TheoremCase.NONLINEAR_HANDELMAN,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skolem-qe",
        description="satisfiability of quantified real-arithmetic formulas "
                    "via polynomial witness templates")
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", help="decide a formula file")
    solve.add_argument("file")
    solve.add_argument("--format", choices=["native", "smt2"], default=None)
    solve.add_argument("--degrees", default="0,1,2",
                       help="ascending template degrees, comma separated")
    solve.add_argument("--handelman-d", type=int, default=2,
                       help="semigroup multiplicity bound")
    solve.add_argument("--sos-d", type=int, default=None,
                       help="fixed basis degree for sum-of-squares blocks")
    solve.add_argument("--theorem", choices=sorted(_THEOREMS), default="auto")
    solve.add_argument("--conclusion", choices=["last", "try-each"], default="last")
    solve.add_argument("--no-negation", action="store_true",
                       help="skip the negated-formula fallback")
    solve.add_argument("--verify", choices=["none", "sample", "solver"],
                       default="solver")
    solve.add_argument("--solver-cmd", default=None,
                       help="external solver command (script path appended)")
    solve.add_argument("--solver-timeout", type=float, default=60.0,
                       help="per-query solver timeout in seconds")
    solve.add_argument("--timeout", type=float, default=None,
                       help="overall time budget in seconds")
    solve.add_argument("--samples", type=int, default=1000)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--json", action="store_true")
    return parser


def config_from_args(args) -> RunConfig:
    degrees = tuple(int(d) for d in str(args.degrees).split(",") if d != "")
    command = (tuple(shlex.split(args.solver_cmd)) if args.solver_cmd
               else default_command())
    return RunConfig(
        degree_schedule=degrees,
        encoder=EncoderConfig(handelman_degree=args.handelman_d,
                              sos_degree=args.sos_d,
                              theorem=_THEOREMS[args.theorem]),
        conclusion_strategy=(ConclusionStrategy.TRY_EACH
                             if args.conclusion == "try-each"
                             else ConclusionStrategy.LAST_LITERAL),
        try_negation=not args.no_negation,
        verify_mode={"none": VerifyMode.NONE, "sample": VerifyMode.SAMPLING,
                     "solver": VerifyMode.SOLVER_CHECK}[args.verify],
        solver=SolverConfig(command=command, timeout=args.solver_timeout),
        total_timeout=args.timeout,
        sample_count=args.samples,
        seed=args.seed,
    )


def _print_human(outcome: Outcome):
    print(outcome.verdict)
    if outcome.witness is not None:
        target = "negated formula" if outcome.route == "negation" else "formula"
        print(f"; witness for the {target} (template degree {outcome.degree}):")
        from .parser import poly_to_infix
        for v, p in sorted(outcome.witness.functions.items(),
                           key=lambda kv: kv[0].sort_key()):
            print(f";   {v.name} = {poly_to_infix(p)}")
    if outcome.report is not None:
        print(f"; verification: {outcome.report.verdict.value} "
              f"({outcome.report.mode.value})")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = (InputFormat.NATIVE if args.format == "native"
           else InputFormat.SMTLIB2 if args.format == "smt2"
           else sniff_format(args.file))
    try:
        with open(args.file, "r", encoding="utf-8") as handle:
            text = handle.read()
        formula = parse(text, fmt)
        outcome = run(formula, config_from_args(args))
    except SoundnessError as exc:
        payload = {"error": "internal soundness failure", "message": str(exc),
                   "payload": exc.payload}
        print(json.dumps(payload, indent=2), file=sys.stderr)
        return 3
    except (SkolemQeError, OSError) as exc:
        if args.json:
            print(json.dumps({"error": str(exc)}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.json:
        print(json.dumps(outcome.to_json_dict(), indent=2))
    else:
        _print_human(outcome)
    return EXIT[outcome.verdict]


if __name__ == "__main__":
    sys.exit(main())
