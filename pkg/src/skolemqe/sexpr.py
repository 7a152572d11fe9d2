"""Minimal s-expression reader with source positions.

Shared by the native formula parser, the SMT-LIB subset parser, the model
parser, and the bundled constraint solver.  Atoms are returned verbatim as
strings; ``;`` starts a comment running to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class Sym:
    """An atomic token with its source position."""

    text: str
    line: int
    column: int

    def __str__(self) -> str:
        return self.text


SExpr = "Sym | list"


def tokenize(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield Sym(ch, line, col)
            col += 1
            i += 1
        elif ch == "|":
            # quoted symbol
            start_line, start_col = line, col
            j = text.find("|", i + 1)
            if j < 0:
                raise ParseError("unterminated quoted symbol", start_line, start_col)
            chunk = text[i + 1:j]
            yield Sym(chunk, start_line, start_col)
            for c in text[i:j + 1]:
                if c == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
            i = j + 1
        else:
            start = i
            start_line, start_col = line, col
            while i < n and text[i] not in " \t\r\n();|":
                i += 1
                col += 1
            yield Sym(text[start:i], start_line, start_col)


def read_all(text: str) -> list:
    """Parse the whole input into a list of s-expressions."""
    stack: list[list] = [[]]
    open_positions: list[tuple[int, int]] = []
    for tok in tokenize(text):
        if tok.text == "(":
            stack.append([])
            open_positions.append((tok.line, tok.column))
        elif tok.text == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", tok.line, tok.column)
            done = stack.pop()
            open_positions.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        line, col = open_positions[-1]
        raise ParseError("unbalanced '('", line, col)
    return stack[0]


def position(node) -> tuple[int | None, int | None]:
    """Best-effort source position of a node."""
    if isinstance(node, Sym):
        return node.line, node.column
    for child in node:
        line, col = position(child)
        if line is not None:
            return line, col
    return None, None


def to_text(node) -> str:
    if isinstance(node, Sym):
        return node.text
    return "(" + " ".join(to_text(c) for c in node) + ")"
