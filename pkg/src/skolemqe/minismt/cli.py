"""Command-line interface: read an SMT-LIB script, print sat/unsat/unknown.

Bundled fallback for environments without an external SMT solver.  It
speaks just enough of the SMT-LIB text protocol to serve as a child
process of the solver backend: script on a file argument or stdin, answer
on the first line, an s-expression model block after a ``sat`` answer.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .reader import read_script
from .solver import solve_problem


def format_value(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator) if q >= 0 else f"(- {-q.numerator})"
    body = f"(/ {abs(q.numerator)} {q.denominator})"
    return body if q >= 0 else f"(- {body})"


def run(text: str, timeout: float | None, seed: int) -> str:
    problem = read_script(text)
    try:
        status, model = solve_problem(problem, timeout, seed)
    except Exception as exc:  # stay protocol-clean on internal errors
        return f"unknown\n; error: {exc}\n"
    lines = [status]
    if status == "sat" and model is not None:
        lines.append("(model")
        for v in problem.variables:
            value = model.get(v, Fraction(0))
            lines.append(f"  (define-fun {v.name} () Real {format_value(value)})")
        lines.append(")")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="skolem-qe-solver",
        description="solve a quantifier-free real-arithmetic SMT-LIB script")
    parser.add_argument("file", nargs="?", help="script path (default: stdin)")
    parser.add_argument("--timeout", type=float, default=None,
                        help="soft time budget in seconds")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if args.file:
        with open(args.file, "r", encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = sys.stdin.read()
    sys.stdout.write(run(text, args.timeout, args.seed))
    return 0


if __name__ == "__main__":
    sys.exit(main())
