"""Euler-Lagrange residual and the linearized operator"""

import numpy as np
from scipy import sparse

from ..lagrangian import term_derivatives
from ..models import Covector, FieldConfig, LagrangianSystem, LinearizedOperator


def el_residual(sys: LagrangianSystem, config: FieldConfig) -> Covector:
    """∂L/∂x_P at every vertex, summed over the terms containing P

    Raises:
        DomainError: if a derivative leaves its real domain
    """
    sys.check_config(config)
    layout = sys.layout
    residual = np.zeros(layout.size)
    for term in sys.terms:
        for var, value in term_derivatives(term).gradient(config).items():
            residual[layout.index(var)] += value
    return layout.unflatten(residual, Covector)


def residual_norm(sys: LagrangianSystem, config: FieldConfig) -> float:
    """Max-norm of the Euler-Lagrange residual"""
    flat = sys.layout.flatten(el_residual(sys, config))
    return float(np.max(np.abs(flat), initial=0.0))


def hessian(sys: LagrangianSystem, config: FieldConfig) -> LinearizedOperator:
    """Symmetric sparse Hessian L_ψ assembled from per-term symbolic blocks"""
    sys.check_config(config)
    layout = sys.layout
    rows, cols, data = [], [], []
    for term in sys.terms:
        derivatives = term_derivatives(term)
        local = derivatives.hessian(config)
        positions = [layout.index(var) for var in derivatives.variables]
        for a, row in enumerate(positions):
            for b, col in enumerate(positions):
                if local[a, b] != 0.0:
                    rows.append(row)
                    cols.append(col)
                    data.append(local[a, b])
    matrix = sparse.coo_matrix((data, (rows, cols)), shape=(layout.size, layout.size)).tocsr()
    return LinearizedOperator(layout=layout, matrix=matrix)
