"""Expression grammar, evaluation and symbolic calculus for potentials"""

from .expression_parser import POTENTIAL_GRAMMAR, PotentialPrinter, parse, to_text
from .expression_calculus import (
    compile_expressions,
    evaluate_many,
    evaluate,
    differentiate,
    mixed_partial,
    is_zero_expression,
)

__all__ = [
    "POTENTIAL_GRAMMAR",
    "PotentialPrinter",
    "parse",
    "to_text",
    "compile_expressions",
    "evaluate_many",
    "evaluate",
    "differentiate",
    "mixed_partial",
    "is_zero_expression",
]
