"""Total Lagrangian, per-term derivatives and finite-difference oracles"""

from .term_calculus import TermDerivatives, term_derivatives
from .lagrangian_functional import (
    total_lagrangian,
    locality_bound,
    fd_gradient,
    fd_hessian,
)

__all__ = [
    "TermDerivatives",
    "term_derivatives",
    "total_lagrangian",
    "locality_bound",
    "fd_gradient",
    "fd_hessian",
]
