"""Input formats: a native s-expression syntax and an SMT-LIB 2 subset.

Native::

    (formula (prefix (forall x1) (exists x2) ...)
             (matrix <bool-expr>))

where atoms are ``(<rel> <poly> <poly>)`` with rel in {<, <=, >, >=, =, !=}
(the right-hand side is usually 0) and polynomial expressions use
``+ * -``, rational literals (``3``, ``3/4``, ``1.25``) and variables.

SMT-LIB subset: one ``assert`` of a prenex forall/exists formula over Real
sorts; ``set-logic``, ``set-info``, ``set-option``, ``check-sat``,
``get-model`` and ``exit`` are accepted and ignored.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

from .errors import FreeVariable, NotPrenex, ParseError, UnsupportedTheory
from .formula import (And, Atom, BoolNode, Or, QuantifiedFormula, Quantifier,
                      Relation, conj, disj, make_atom, negate_node)
from .poly import TemplatePolynomial, VarId, program_var
from .sexpr import Sym, position, read_all


class InputFormat(Enum):
    NATIVE = "native"
    SMTLIB2 = "smt2"


_RELATIONS = {
    "<": Relation.LT,
    "<=": Relation.LE,
    ">": Relation.GT,
    ">=": Relation.GE,
    "=": Relation.EQ,
    "!=": Relation.NE,
    "distinct": Relation.NE,
}

_TRANSCENDENTAL = {"sin", "cos", "tan", "exp", "log", "ln", "sqrt", "sinh",
                   "cosh", "tanh", "arcsin", "arccos", "arctan", "pow", "^"}


def parse(text: str, format: InputFormat = InputFormat.NATIVE) -> QuantifiedFormula:
    """Parse ``text`` into a closed prenex formula with canonical atoms."""
    if format is InputFormat.NATIVE:
        return _parse_native(text)
    return _parse_smt2(text)


def _literal(token: Sym) -> Fraction | None:
    try:
        return Fraction(token.text)
    except (ValueError, ZeroDivisionError):
        return None


def _err(node, message: str, cls=ParseError):
    line, col = position(node)
    raise cls(message, line, col)


class _TermEnv:
    """Variable scope for term parsing, including let bindings."""

    def __init__(self, variables: dict[str, VarId]):
        self.variables = variables
        self.lets: list[dict[str, TemplatePolynomial]] = []

    def lookup(self, name: str) -> TemplatePolynomial | None:
        for frame in reversed(self.lets):
            if name in frame:
                return frame[name]
        v = self.variables.get(name)
        return TemplatePolynomial.var(v) if v is not None else None


def _parse_term(node, env: _TermEnv) -> TemplatePolynomial:
    if isinstance(node, Sym):
        lit = _literal(node)
        if lit is not None:
            return TemplatePolynomial.const(lit)
        bound = env.lookup(node.text)
        if bound is None:
            _err(node, f"unbound variable '{node.text}'", FreeVariable)
        return bound
    if not node:
        _err(node, "empty term")
    head = node[0]
    if not isinstance(head, Sym):
        _err(node, "expected operator")
    op = head.text
    args = node[1:]
    if op in _TRANSCENDENTAL:
        _err(node, f"'{op}' is outside real polynomial arithmetic", UnsupportedTheory)
    if op == "+":
        total = TemplatePolynomial.zero()
        for a in args:
            total = total.add(_parse_term(a, env))
        return total
    if op == "*":
        prod = TemplatePolynomial.const(1)
        for a in args:
            prod = prod.mul(_parse_term(a, env))
        return prod
    if op == "-":
        if not args:
            _err(node, "'-' needs arguments")
        first = _parse_term(args[0], env)
        if len(args) == 1:
            return first.neg()
        for a in args[1:]:
            first = first.sub(_parse_term(a, env))
        return first
    if op == "/":
        if len(args) != 2:
            _err(node, "'/' takes two arguments")
        num = _parse_term(args[0], env)
        den = _parse_term(args[1], env)
        if not (den.is_ground() and den.is_const()):
            _err(node, "division by a variable is not supported", UnsupportedTheory)
        d = den.const_value()
        if d == 0:
            _err(node, "division by zero")
        return num.scale(Fraction(1, 1) / d)
    if op == "let":
        return _parse_let(node, env, _parse_term)
    _err(node, f"unknown operator '{op}'")


def _parse_let(node, env: _TermEnv, cont):
    if len(node) != 3 or not isinstance(node[1], list):
        _err(node, "malformed let")
    frame: dict[str, TemplatePolynomial] = {}
    for binding in node[1]:
        if not (isinstance(binding, list) and len(binding) == 2
                and isinstance(binding[0], Sym)):
            _err(node, "malformed let binding")
        frame[binding[0].text] = _parse_term(binding[1], env)
    env.lets.append(frame)
    try:
        return cont(node[2], env)
    finally:
        env.lets.pop()


def _parse_bool(node, env: _TermEnv, negated: bool = False) -> BoolNode:
    if isinstance(node, Sym):
        if node.text == "true":
            value = not negated
        elif node.text == "false":
            value = negated
        else:
            _err(node, f"expected boolean expression, got '{node.text}'")
        return make_atom(TemplatePolynomial.zero(),
                         Relation.GE if value else Relation.GT)
    if not node:
        _err(node, "empty expression")
    head = node[0]
    if not isinstance(head, Sym):
        _err(node, "expected connective or relation")
    op = head.text
    if op in ("forall", "exists"):
        _err(node, "quantifier below a boolean connective", NotPrenex)
    if op == "and":
        kids = [_parse_bool(c, env, negated) for c in node[1:]]
        return disj(kids) if negated else conj(kids)
    if op == "or":
        kids = [_parse_bool(c, env, negated) for c in node[1:]]
        return conj(kids) if negated else disj(kids)
    if op == "not":
        if len(node) != 2:
            _err(node, "'not' takes one argument")
        return _parse_bool(node[1], env, not negated)
    if op == "=>":
        if len(node) != 3:
            _err(node, "'=>' takes two arguments")
        left = _parse_bool(node[1], env, not negated)
        right = _parse_bool(node[2], env, negated)
        return conj([left, right]) if negated else disj([left, right])
    if op == "let":
        return _parse_let(node, env, lambda body, e: _parse_bool(body, e, negated))
    if op in _RELATIONS:
        rel = _RELATIONS[op]
        args = node[1:]
        if len(args) < 2:
            _err(node, f"'{op}' needs two arguments")
        # chains like (< a b c) expand pairwise
        atoms = []
        for left, right in zip(args, args[1:]):
            p = _parse_term(left, env).sub(_parse_term(right, env))
            atoms.append(make_atom(p, rel))
        tree = conj(atoms)
        return negate_node(tree) if negated else tree
    if op in _TRANSCENDENTAL:
        _err(node, f"'{op}' is outside real polynomial arithmetic", UnsupportedTheory)
    _err(node, f"unknown connective '{op}'")


def _parse_native(text: str) -> QuantifiedFormula:
    forms = read_all(text)
    if len(forms) != 1 or not isinstance(forms[0], list):
        raise ParseError("expected a single (formula ...) form")
    form = forms[0]
    if not (form and isinstance(form[0], Sym) and form[0].text == "formula"):
        _err(form, "expected (formula ...)")
    prefix_form = matrix_form = None
    for part in form[1:]:
        if isinstance(part, list) and part and isinstance(part[0], Sym):
            if part[0].text == "prefix":
                prefix_form = part
            elif part[0].text == "matrix":
                matrix_form = part
    if prefix_form is None or matrix_form is None:
        _err(form, "formula needs (prefix ...) and (matrix ...)")
    prefix: list[tuple[Quantifier, VarId]] = []
    variables: dict[str, VarId] = {}
    for entry in prefix_form[1:]:
        if not (isinstance(entry, list) and len(entry) == 2
                and isinstance(entry[0], Sym) and isinstance(entry[1], Sym)):
            _err(entry, "prefix entries look like (forall x) or (exists x)")
        q_text, name = entry[0].text, entry[1].text
        if q_text not in ("forall", "exists"):
            _err(entry, f"unknown quantifier '{q_text}'")
        if name in variables:
            _err(entry, f"variable '{name}' quantified twice")
        v = program_var(name)
        variables[name] = v
        prefix.append((Quantifier.FORALL if q_text == "forall" else Quantifier.EXISTS, v))
    if len(matrix_form) != 2:
        _err(matrix_form, "matrix takes exactly one expression")
    env = _TermEnv(variables)
    matrix = _parse_bool(matrix_form[1], env)
    return QuantifiedFormula(tuple(prefix), matrix)


_IGNORED_COMMANDS = {"set-info", "set-option", "check-sat", "get-model",
                     "exit", "get-info", "echo", "push", "pop"}


def _parse_smt2(text: str) -> QuantifiedFormula:
    forms = read_all(text)
    assertion = None
    declared: dict[str, VarId] = {}
    for form in forms:
        if not (isinstance(form, list) and form and isinstance(form[0], Sym)):
            _err(form, "expected a command")
        cmd = form[0].text
        if cmd == "set-logic":
            continue
        if cmd in _IGNORED_COMMANDS:
            continue
        if cmd in ("declare-const", "declare-fun"):
            name = form[1].text if len(form) > 1 and isinstance(form[1], Sym) else None
            if name is None:
                _err(form, "malformed declaration")
            sort = form[-1]
            if not (isinstance(sort, Sym) and sort.text == "Real"):
                _err(form, "only Real sorts are supported", UnsupportedTheory)
            if cmd == "declare-fun" and len(form) == 4 and form[2] != []:
                _err(form, "uninterpreted functions are not supported", UnsupportedTheory)
            declared[name] = program_var(name)
            continue
        if cmd == "assert":
            if assertion is not None:
                _err(form, "multiple asserts; expected exactly one")
            if len(form) != 2:
                _err(form, "assert takes one formula")
            assertion = form[1]
            continue
        _err(form, f"unsupported command '{cmd}'")
    if assertion is None:
        raise ParseError("no assert found")
    prefix: list[tuple[Quantifier, VarId]] = []
    variables: dict[str, VarId] = {}
    body = assertion
    while (isinstance(body, list) and body and isinstance(body[0], Sym)
           and body[0].text in ("forall", "exists")):
        q = Quantifier.FORALL if body[0].text == "forall" else Quantifier.EXISTS
        if len(body) != 3 or not isinstance(body[1], list):
            _err(body, "malformed quantifier")
        for binder in body[1]:
            if not (isinstance(binder, list) and len(binder) == 2
                    and isinstance(binder[0], Sym) and isinstance(binder[1], Sym)):
                _err(body, "binders look like (x Real)")
            name, sort = binder[0].text, binder[1].text
            if sort != "Real":
                _err(binder, f"sort '{sort}' is not supported", UnsupportedTheory)
            if name in variables:
                _err(binder, f"variable '{name}' quantified twice")
            v = program_var(name)
            variables[name] = v
            prefix.append((q, v))
        body = body[2]
    # Declared constants stay out of scope: a closed formula may only use
    # prefix-bound variables, so using one raises FreeVariable below.
    env = _TermEnv(variables)
    matrix = _parse_bool(body, env)
    return QuantifiedFormula(tuple(prefix), matrix)


def sniff_format(path: str) -> InputFormat:
    return InputFormat.SMTLIB2 if path.endswith(".smt2") else InputFormat.NATIVE


def format_rational(q: Fraction) -> str:
    return str(q)


def poly_to_native(p: TemplatePolynomial) -> str:
    """Print a polynomial in the native s-expression term grammar."""
    if p.is_zero():
        return "0"
    terms = []
    for m, c in p.terms:
        factors = []
        for v, e in m.powers:
            factors.extend([v.name] * e)
        if c.is_const():
            q = c.const_value()
            if not factors:
                terms.append(format_rational(q))
            elif q == 1 and len(factors) == 1:
                terms.append(factors[0])
            else:
                terms.append("(* " + " ".join([format_rational(q)] + factors) + ")")
        else:
            coeff_terms = []
            for um, uc in c.terms:
                ufactors = [format_rational(uc)] if uc != 1 or um.is_one() else []
                for v, e in um.powers:
                    ufactors.extend([v.name] * e)
                coeff_terms.append(ufactors[0] if len(ufactors) == 1
                                   else "(* " + " ".join(ufactors) + ")")
            coeff = coeff_terms[0] if len(coeff_terms) == 1 else "(+ " + " ".join(coeff_terms) + ")"
            if factors:
                terms.append("(* " + " ".join([coeff] + factors) + ")")
            else:
                terms.append(coeff)
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


def poly_to_infix(p: TemplatePolynomial) -> str:
    """Human-readable rendering used in JSON output, e.g. ``1 + x1``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for m, c in p.terms:
        mono = "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in m.powers)
        if c.is_const():
            q = c.const_value()
            if not mono:
                chunk = format_rational(q)
            elif q == 1:
                chunk = mono
            elif q == -1:
                chunk = f"-{mono}"
            else:
                chunk = f"{format_rational(q)}*{mono}"
        else:
            chunk = f"({c})*{mono}" if mono else f"({c})"
        parts.append(chunk)
    out = parts[0]
    for chunk in parts[1:]:
        if chunk.startswith("-"):
            out += " - " + chunk[1:]
        else:
            out += " + " + chunk
    return out


def _node_to_native(node: BoolNode) -> str:
    if isinstance(node, And):
        return "(and " + " ".join(_node_to_native(c) for c in node.children) + ")"
    if isinstance(node, Or):
        return "(or " + " ".join(_node_to_native(c) for c in node.children) + ")"
    return f"({node.rel.value} {poly_to_native(node.poly)} 0)"


def formula_to_native(f: QuantifiedFormula) -> str:
    prefix = " ".join(f"({q.value} {v.name})" for q, v in f.prefix)
    return f"(formula (prefix {prefix}) (matrix {_node_to_native(f.matrix)}))"
