"""Read a quantifier-free SMT-LIB real-arithmetic script into constraints."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ParseError, UnsupportedTheory
from ..poly import CoeffPoly, Monomial, VarId, unknown_var
from ..sexpr import Sym, read_all

EQ, GE, GT, NE = "=", ">=", ">", "!="

Atom = tuple[str, CoeffPoly]  # (relation, polynomial compared to zero)


@dataclass
class Node:
    kind: str  # "and" | "or" | "atom" | "true" | "false"
    children: tuple["Node", ...] = ()
    atom: Atom | None = None


@dataclass
class Problem:
    variables: list[VarId] = field(default_factory=list)
    assertions: list[Node] = field(default_factory=list)
    logic: str = ""


def _term(node, variables: dict[str, VarId], lets) -> CoeffPoly:
    if isinstance(node, Sym):
        text = node.text
        for frame in reversed(lets):
            if text in frame:
                return frame[text]
        if text in variables:
            return CoeffPoly.var(variables[text])
        try:
            return CoeffPoly.const(Fraction(text))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"unknown symbol '{text}'", node.line, node.column)
    if not node or not isinstance(node[0], Sym):
        raise ParseError("malformed term")
    op = node[0].text
    args = node[1:]
    if op == "+":
        total = CoeffPoly.zero()
        for a in args:
            total = total.add(_term(a, variables, lets))
        return total
    if op == "*":
        prod = CoeffPoly.const(1)
        for a in args:
            prod = prod.mul(_term(a, variables, lets))
        return prod
    if op == "-":
        first = _term(args[0], variables, lets)
        if len(args) == 1:
            return first.neg()
        for a in args[1:]:
            first = first.sub(_term(a, variables, lets))
        return first
    if op == "/":
        num = _term(args[0], variables, lets)
        den = _term(args[1], variables, lets)
        if not den.is_const() or den.const_value() == 0:
            raise UnsupportedTheory("non-constant divisor")
        return num.scale(Fraction(1) / den.const_value())
    if op == "let":
        frame = {}
        for binding in node[1]:
            frame[binding[0].text] = _term(binding[1], variables, lets)
        lets.append(frame)
        try:
            return _term(node[2], variables, lets)
        finally:
            lets.pop()
    raise ParseError(f"unsupported term operator '{op}'")


_NEGATED = {EQ: NE, NE: EQ, GE: None, GT: None}


def _formula(node, variables, lets, negated: bool) -> Node:
    if isinstance(node, Sym):
        if node.text == "true":
            return Node("false" if negated else "true")
        if node.text == "false":
            return Node("true" if negated else "false")
        raise ParseError(f"expected formula, got '{node.text}'",
                         node.line, node.column)
    if not node or not isinstance(node[0], Sym):
        raise ParseError("malformed formula")
    op = node[0].text
    if op == "and":
        kids = tuple(_formula(c, variables, lets, negated) for c in node[1:])
        return Node("or" if negated else "and", kids)
    if op == "or":
        kids = tuple(_formula(c, variables, lets, negated) for c in node[1:])
        return Node("and" if negated else "or", kids)
    if op == "not":
        return _formula(node[1], variables, lets, not negated)
    if op == "=>":
        left = _formula(node[1], variables, lets, not negated)
        right = _formula(node[2], variables, lets, negated)
        return Node("and" if negated else "or", (left, right))
    if op == "let":
        frame = {}
        for binding in node[1]:
            frame[binding[0].text] = _term(binding[1], variables, lets)
        lets.append(frame)
        try:
            return _formula(node[2], variables, lets, negated)
        finally:
            lets.pop()
    if op in ("<", "<=", ">", ">=", "=", "distinct"):
        left = _term(node[1], variables, lets)
        right = _term(node[2], variables, lets)
        diff = left.sub(right)
        rel = {"<": (GT, True), "<=": (GE, True), ">": (GT, False),
               ">=": (GE, False), "=": (EQ, False), "distinct": (NE, False)}[op]
        relation, flip = rel
        poly = diff.neg() if flip else diff
        if negated:
            if relation == EQ:
                relation = NE
            elif relation == NE:
                relation = EQ
            elif relation == GE:
                relation, poly = GT, poly.neg()
            else:
                relation, poly = GE, poly.neg()
        return Node("atom", atom=(relation, poly))
    raise ParseError(f"unsupported connective '{op}'")


def read_script(text: str) -> Problem:
    problem = Problem()
    variables: dict[str, VarId] = {}
    for form in read_all(text):
        if not form or not isinstance(form[0], Sym):
            continue
        cmd = form[0].text
        if cmd == "set-logic":
            problem.logic = form[1].text if len(form) > 1 else ""
        elif cmd in ("declare-const", "declare-fun"):
            name = form[1].text
            v = unknown_var(name)
            variables[name] = v
            problem.variables.append(v)
        elif cmd == "assert":
            problem.assertions.append(_formula(form[1], variables, [], False))
        # check-sat, get-model, exit and friends need no action
    return problem
