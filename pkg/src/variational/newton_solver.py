"""Plain Newton iteration for the Euler-Lagrange equations"""

import logging
import warnings
from typing import Callable, Optional

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from ..models import FieldConfig, LagrangianSystem, NoConvergence, SingularJacobian, SolveResult
from .euler_lagrange import el_residual, hessian

logger = logging.getLogger(__name__)

PIVOT_THRESHOLD = 1e-12


def solve_newton(
    sys: LagrangianSystem,
    init: FieldConfig,
    tol: float = 1e-10,
    max_iter: int = 50,
    ridge: Optional[float] = None,
    callback: Optional[Callable[[int, float], None]] = None,
) -> SolveResult:
    """Solve δL = 0 by full Newton steps

    Args:
        sys: Lagrangian system
        init: Initial configuration
        tol: Target max-norm of the residual
        max_iter: Maximal number of Newton steps
        ridge: Optional Tikhonov shift λ added to the Hessian diagonal
        callback: Called with (iteration, residual) before each step

    Returns:
        SolveResult with the converged configuration and residual history

    Raises:
        SingularJacobian: if an LU pivot falls below 1e-12 of the Hessian scale
        NoConvergence: after max_iter steps, carrying the best iterate
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    layout = sys.layout
    x = layout.flatten(init)
    history = []
    best_x, best_norm = x.copy(), np.inf

    for iteration in range(max_iter + 1):
        config = layout.unflatten(x, FieldConfig)
        r = layout.flatten(el_residual(sys, config))
        norm = float(np.max(np.abs(r), initial=0.0))
        history.append(norm)
        if callback is not None:
            callback(iteration, norm)
        logger.info(f"Newton iteration {iteration}: residual {norm:.3e}")
        if norm < best_norm:
            best_x, best_norm = x.copy(), norm
        if norm <= tol:
            return SolveResult(config=config, iterations=iteration, residual=norm, residual_history=history)
        if iteration == max_iter:
            break

        h = hessian(sys, config).dense()
        if ridge:
            h = h + ridge * np.eye(layout.size)
        scale = float(np.max(np.abs(h), initial=0.0))
        if scale == 0.0:
            raise SingularJacobian(0.0, 0.0, iteration)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(h)
        pivot = float(np.min(np.abs(np.diag(lu))))
        if pivot < PIVOT_THRESHOLD * scale:
            raise SingularJacobian(pivot, scale, iteration)
        x = x + lu_solve((lu, piv), -r)

    raise NoConvergence(layout.unflatten(best_x, FieldConfig), best_norm, max_iter)
