"""Euler-Lagrange residuals, Hessians, Newton solving and kernels"""

from .euler_lagrange import el_residual, residual_norm, hessian
from .newton_solver import solve_newton
from .kernel import kernel_basis, open_kernel_basis

__all__ = [
    "el_residual",
    "residual_norm",
    "hessian",
    "solve_newton",
    "kernel_basis",
    "open_kernel_basis",
]
