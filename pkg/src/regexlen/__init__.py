"""Length-aware automata solver for regex membership and string-length arithmetic."""

from regexlen.alphabet import Alphabet
from regexlen.budget import Budgets
from regexlen.parser import parse_script
from regexlen.solver import HeuristicConfig, SolverResult, solve, validate_model

__all__ = [
    "Alphabet",
    "Budgets",
    "HeuristicConfig",
    "SolverResult",
    "parse_script",
    "solve",
    "validate_model",
]

__version__ = "0.1.0"
