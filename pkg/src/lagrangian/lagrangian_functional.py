"""Total Lagrangian, locality bound and finite-difference oracles"""

import logging
from typing import Callable

import numpy as np

from ..graph import set_diameter
from ..models import Covector, FieldConfig, LagrangianSystem
from .term_calculus import term_derivatives

logger = logging.getLogger(__name__)


def total_lagrangian(sys: LagrangianSystem, config: FieldConfig) -> float:
    """L{Ψ} = Σ_α Λ^α evaluated at a configuration

    Terms are summed in their declared order.

    Raises:
        DomainError: if a potential leaves its real domain
    """
    sys.check_config(config)
    total = 0.0
    for term in sys.terms:
        total += term_derivatives(term).value(config)
    return total


def locality_bound(sys: LagrangianSystem) -> int:
    """Largest set diameter over the interaction family (0 for no terms)

    The system is local with M = locality_bound(sys) + 1.

    Raises:
        NoPath: if a term straddles components
    """
    return max((set_diameter(sys.graph, term.vertices) for term in sys.terms), default=0)


def _flat_lagrangian(sys: LagrangianSystem) -> Callable[[np.ndarray], float]:
    layout = sys.layout

    def value(vec: np.ndarray) -> float:
        config = layout.unflatten(vec, FieldConfig)
        return sum(term_derivatives(term).value(config) for term in sys.terms)

    return value


def fd_gradient(sys: LagrangianSystem, config: FieldConfig, step: float = 1e-5) -> Covector:
    """Central-difference gradient of the total Lagrangian"""
    if step <= 0:
        raise ValueError("step must be positive")
    sys.check_config(config)
    func = _flat_lagrangian(sys)
    base = sys.layout.flatten(config)
    grad = np.zeros_like(base)
    for a in range(base.size):
        shift = np.zeros_like(base)
        shift[a] = step
        grad[a] = (func(base + shift) - func(base - shift)) / (2 * step)
    return sys.layout.unflatten(grad, Covector)


def fd_hessian(sys: LagrangianSystem, config: FieldConfig, step: float = 1e-4) -> np.ndarray:
    """Central-difference Hessian (four-point stencil), symmetrized"""
    if step <= 0:
        raise ValueError("step must be positive")
    sys.check_config(config)
    func = _flat_lagrangian(sys)
    base = sys.layout.flatten(config)
    n = base.size
    hess = np.zeros((n, n))
    eye = np.eye(n) * step
    for a in range(n):
        for b in range(a, n):
            value = (
                func(base + eye[a] + eye[b])
                - func(base + eye[a] - eye[b])
                - func(base - eye[a] + eye[b])
                + func(base - eye[a] - eye[b])
            ) / (4 * step * step)
            hess[a, b] = value
            hess[b, a] = value
    return hess
