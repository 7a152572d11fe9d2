"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SkolemQeError(Exception):
    """Base class for all errors raised by this package."""


class UnboundVariable(SkolemQeError):
    """A polynomial was evaluated at a point missing one of its variables."""


class ParseError(SkolemQeError):
    """Malformed input text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class NotPrenex(ParseError):
    """A quantifier occurred below a boolean connective."""


class UnsupportedTheory(ParseError):
    """Input uses constructs outside real arithmetic (division by a
    variable, transcendental functions, non-real sorts)."""


class FreeVariable(ParseError):
    """The matrix mentions a variable that is not bound by the prefix."""


class SizeLimitExceeded(SkolemQeError):
    """A normalisation or enumeration step exceeded its configured budget."""


class WrongCase(SkolemQeError):
    """An encoder was applied to an entailment outside its precondition."""


class BackendError(SkolemQeError):
    """Base class for solver-backend failures."""


class SolverCrash(BackendError):
    """The child solver exited abnormally without a parseable answer."""


class ModelParseError(BackendError):
    """The solver's model response could not be parsed."""


class IrrationalModel(BackendError):
    """The solver's model contains non-rational (algebraic) values."""


class InvalidModel(BackendError):
    """A parsed model failed exact re-validation against the query."""


class MissingBinding(SkolemQeError):
    """A model does not bind an unknown required by a template."""


class SoundnessError(SkolemQeError):
    """Internal invariant violation: a produced witness failed verification.

    This is never expected to fire; it indicates a bug in the pipeline and is
    reported with a full payload for diagnosis.
    """

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}
