"""Compiled value, gradient and Hessian of a single interaction term"""

from functools import cached_property, lru_cache
from typing import Dict, List, Tuple

import numpy as np
import sympy as sp

from ..expr import evaluate_many, mixed_partial
from ..models import InteractionTerm, Variable, VertexField


class TermDerivatives:
    """Symbolic derivatives of Λ^α, evaluated through one lambdified call each"""

    def __init__(self, term: InteractionTerm):
        self.term = term
        self.variables: Tuple[Variable, ...] = tuple(term.variables)

    @cached_property
    def gradient_exprs(self) -> Tuple[sp.Expr, ...]:
        return tuple(mixed_partial(self.term.potential, var) for var in self.variables)

    @cached_property
    def hessian_exprs(self) -> Dict[Tuple[int, int], sp.Expr]:
        """Nonzero upper-triangle second derivatives keyed by variable positions"""
        entries = {}
        for a, var_a in enumerate(self.variables):
            for b in range(a, len(self.variables)):
                expr = mixed_partial(self.term.potential, var_a, self.variables[b])
                if expr != 0:
                    entries[(a, b)] = expr
        return entries

    def point(self, config: VertexField) -> List[float]:
        return [float(config[var.vertex][var.index]) for var in self.variables]

    def value(self, config: VertexField) -> float:
        return evaluate_many([self.term.potential], self.variables, self.point(config))[0]

    def gradient(self, config: VertexField) -> Dict[Variable, float]:
        if not self.variables:
            return {}
        values = evaluate_many(self.gradient_exprs, self.variables, self.point(config))
        return dict(zip(self.variables, values))

    def hessian(self, config: VertexField) -> np.ndarray:
        """Dense symmetric Hessian over self.variables"""
        size = len(self.variables)
        matrix = np.zeros((size, size))
        if not self.hessian_exprs:
            return matrix
        keys = list(self.hessian_exprs)
        values = evaluate_many([self.hessian_exprs[k] for k in keys], self.variables, self.point(config))
        for (a, b), value in zip(keys, values):
            matrix[a, b] = value
            matrix[b, a] = value
        return matrix

    def mixed_block(self, p: str, q: str, dim_p: int, dim_q: int, config: VertexField) -> np.ndarray:
        """H_pq = ∂²Λ/∂x_p∂x_q as a dim_p x dim_q block (zero for absent variables)"""
        block = np.zeros((dim_p, dim_q))
        full = self.hessian(config)
        for a, var_a in enumerate(self.variables):
            if var_a.vertex != p:
                continue
            for b, var_b in enumerate(self.variables):
                if var_b.vertex == q:
                    block[var_a.index, var_b.index] = full[a, b]
        return block


@lru_cache(maxsize=None)
def term_derivatives(term: InteractionTerm) -> TermDerivatives:
    """Shared derivative cache per term"""
    return TermDerivatives(term)
