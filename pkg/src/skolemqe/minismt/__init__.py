"""Bundled fallback solver for quantifier-free real arithmetic."""

from .reader import read_script
from .solver import solve_problem

__all__ = ["read_script", "solve_problem"]
