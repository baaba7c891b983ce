"""Evaluation and exact differentiation of potentials"""

import math
from functools import lru_cache
from typing import Callable, Mapping, Sequence, Tuple

import sympy as sp

from ..models import DomainError, UnboundVariable, Variable, expression_variables

_DOMAIN_FAILURES = (ValueError, ZeroDivisionError, OverflowError, TypeError)
_NON_FINITE = (sp.zoo, sp.nan, sp.oo, -sp.oo)


@lru_cache(maxsize=None)
def compile_expressions(exprs: Tuple[sp.Expr, ...], variables: Tuple[Variable, ...]) -> Callable[..., list]:
    """Lambdify a tuple of expressions over positional coordinate arguments"""
    symbols = [var.symbol for var in variables]
    return sp.lambdify(symbols, list(exprs), modules="math", dummify=True)


def evaluate_many(exprs: Sequence[sp.Expr], variables: Sequence[Variable], values: Sequence[float]) -> list:
    """Evaluate several expressions at one point given positionally

    Raises:
        DomainError: when any expression leaves the real domain
    """
    exprs = tuple(exprs)
    for expr in exprs:
        if expr.has(*_NON_FINITE):
            raise DomainError(f"Expression {expr} is not finite")
    func = compile_expressions(exprs, tuple(variables))
    try:
        results = func(*[float(v) for v in values])
    except _DOMAIN_FAILURES as exc:
        raise DomainError(f"Evaluation failed: {exc}") from exc
    out = []
    for value in results:
        if isinstance(value, complex) or not math.isfinite(value):
            raise DomainError(f"Non-real or non-finite value {value!r}")
        out.append(float(value))
    return out


def evaluate(e: sp.Expr, binding: Mapping[Variable, float]) -> float:
    """Evaluate an expression in IEEE double precision

    Args:
        e: Parsed expression
        binding: Value for every variable of the expression

    Returns:
        Real value

    Raises:
        UnboundVariable: if the binding misses a variable
        DomainError: on log of a non-positive number, division by zero or overflow
    """
    variables = expression_variables(e)
    missing = [str(v) for v in variables if v not in binding]
    if missing:
        raise UnboundVariable(f"No value bound for {', '.join(missing)}")
    return evaluate_many([e], variables, [binding[v] for v in variables])[0]


@lru_cache(maxsize=None)
def differentiate(e: sp.Expr, v: Variable) -> sp.Expr:
    """Exact symbolic derivative; sympy folds 0·e, 1·e, e+0 and constants"""
    return sp.diff(e, v.symbol)


def mixed_partial(e: sp.Expr, *variables: Variable) -> sp.Expr:
    """Iterated derivative; variables are sorted so equal multisets share one expression"""
    result = e
    for var in sorted(variables):
        result = differentiate(result, var)
    return result


def is_zero_expression(e: sp.Expr) -> bool:
    """Structural zero test after expansion, with simplify as fallback"""
    if e == 0:
        return True
    expanded = sp.expand(e)
    if expanded == 0:
        return True
    return sp.simplify(expanded) == 0
