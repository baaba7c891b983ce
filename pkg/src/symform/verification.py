"""Closedness of Ω and its boundary at every vertex"""

import logging
from typing import Dict, Tuple

import numpy as np
import sympy as sp

from ..expr import evaluate_many, is_zero_expression, mixed_partial
from ..lagrangian import term_derivatives
from ..models import (
    BoundaryForms,
    ChainValued2Form,
    ClosednessResult,
    Edge,
    FieldConfig,
    MismatchedSystem,
    NotNormalized,
    TreeLikeSystem,
    TreeLikeTerm,
    Variable,
)
from ..variational import hessian
from .omega import assemble_omega

logger = logging.getLogger(__name__)

ANALYTIC = "analytic"
FINITE_DIFFERENCE = "fd"

Triple = Tuple[Variable, Variable, Variable]


def _path_sign(t: TreeLikeTerm, edge: Edge, p: str, q: str) -> float:
    if p == q:
        return 0.0
    return t.paths[(p, q)].coefficient(edge)


def _symbolic_differentials(tsys: TreeLikeSystem) -> Dict[Edge, Dict[Triple, sp.Expr]]:
    """dB_e(a,b,c) = T_abc (s(b,c) - s(a,c) + s(a,b)) summed over terms"""
    layout = tsys.system.layout
    out: Dict[Edge, Dict[Triple, sp.Expr]] = {}
    for t in tsys.terms:
        variables = sorted(term_derivatives(t.term).variables, key=layout.index)
        edges = {e for chain in t.paths.values() for e in chain.core}
        n = len(variables)
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    a, b, c = variables[i], variables[j], variables[k]
                    third = mixed_partial(t.term.potential, a, b, c)
                    if third == 0:
                        continue
                    for edge in edges:
                        weight = (
                            _path_sign(t, edge, b.vertex, c.vertex)
                            - _path_sign(t, edge, a.vertex, c.vertex)
                            + _path_sign(t, edge, a.vertex, b.vertex)
                        )
                        if weight == 0:
                            continue
                        per_edge = out.setdefault(edge, {})
                        per_edge[(a, b, c)] = per_edge.get((a, b, c), sp.Integer(0)) + sp.Integer(int(round(weight))) * third
    return out


def _analytic(tsys: TreeLikeSystem, config: FieldConfig) -> ClosednessResult:
    layout = tsys.system.layout
    point = layout.flatten(config)
    per_edge = {edge: 0.0 for edge in tsys.system.graph.edges}
    symbolic_zero = True
    for edge, triples in _symbolic_differentials(tsys).items():
        exprs = list(triples.values())
        if all(is_zero_expression(e) for e in exprs):
            continue
        symbolic_zero = False
        values = evaluate_many(exprs, layout.variables, point)
        per_edge[edge] = max(abs(v) for v in values)
    return ClosednessResult(mode=ANALYTIC, per_edge=per_edge, symbolic_zero=symbolic_zero)


def _finite_difference(tsys: TreeLikeSystem, config: FieldConfig, step: float) -> ClosednessResult:
    layout = tsys.system.layout
    base = layout.flatten(config)
    n = layout.size
    edges = tsys.system.graph.edges
    derivative = {edge: np.zeros((n, n, n)) for edge in edges}
    for a in range(n):
        shift = np.zeros(n)
        shift[a] = step
        plus = assemble_omega(tsys, layout.unflatten(base + shift, FieldConfig))
        minus = assemble_omega(tsys, layout.unflatten(base - shift, FieldConfig))
        for edge in edges:
            derivative[edge][a] = (plus.edge_matrix(edge) - minus.edge_matrix(edge)) / (2 * step)
    per_edge = {}
    for edge, d in derivative.items():
        exterior = d - d.transpose(1, 0, 2) + d.transpose(1, 2, 0)
        per_edge[edge] = float(np.max(np.abs(exterior), initial=0.0))
    return ClosednessResult(mode=FINITE_DIFFERENCE, per_edge=per_edge)


def check_closedness(
    tsys: TreeLikeSystem,
    config: FieldConfig,
    mode: str = ANALYTIC,
    fd_step: float = 1e-4,
) -> ClosednessResult:
    """Per-edge max |dB_e| over coordinate triples

    Args:
        tsys: Normalized system
        config: Configuration at which to evaluate
        mode: "analytic" (symbolic third derivatives) or "fd" (central differences of Ω)
        fd_step: Step for the finite-difference mode

    Raises:
        NotNormalized: if tsys is not a TreeLikeSystem
    """
    if not isinstance(tsys, TreeLikeSystem):
        raise NotNormalized("check_closedness needs a normalized (tree-like) system")
    tsys.system.check_config(config)
    if mode == ANALYTIC:
        result = _analytic(tsys, config)
    elif mode == FINITE_DIFFERENCE:
        if fd_step <= 0:
            raise ValueError("fd_step must be positive")
        result = _finite_difference(tsys, config, fd_step)
    else:
        raise ValueError(f"Unknown closedness mode {mode!r}")
    logger.info(f"Closedness ({result.mode}): max |dB| = {result.max_value:.3e}")
    return result


def _same_config(a: FieldConfig, b: FieldConfig) -> bool:
    if set(a.values) != set(b.values):
        return False
    return all(np.array_equal(a[v], b[v]) for v in a.values)


def boundary_omega(form: ChainValued2Form, tsys: TreeLikeSystem, config: FieldConfig) -> BoundaryForms:
    """∂Ω at every vertex (A_P) next to the closed form G_P built from L_ψ

    G_P(u, v) = v_Pᵀ (L u)_P - u_Pᵀ (L v)_P, where at attach vertices of coupled
    tails L carries the tail-extended rows. A_P = G_P holds at any configuration.

    Raises:
        MismatchedSystem: if the form was assembled from another system or configuration
    """
    if form.tree_system is not tsys or not _same_config(form.config, config):
        raise MismatchedSystem("Form was not assembled from this system and configuration")
    sys = tsys.system
    graph = sys.graph
    layout = sys.layout
    rows = hessian(sys, config).dense()

    a_forms = {v: np.zeros((layout.size, layout.size)) for v in graph.vertices}
    for edge in form.support:
        matrix = form.edge_matrix(edge)
        tail_vertex, head_vertex = edge
        a_forms[head_vertex] += matrix
        a_forms[tail_vertex] -= matrix
    for name, tail_form in form.tail_forms.items():
        a_forms[tail_form.attach] -= form.tail_matrix(name)

    extended = {}
    for tail_form in form.tail_forms.values():
        extended.setdefault(tail_form.attach, []).append(tail_form)

    g_forms = {}
    for vertex in graph.vertices:
        selector = layout.selector(vertex)
        r = rows[layout.slice(vertex), :]
        # the symmetric ∂²Λ/∂in² part of the tail rows drops out of G_P
        for tail_form in extended.get(vertex, []):
            r = r + tail_form.coupling @ tail_form.extension
        g_forms[vertex] = r.T @ selector - selector.T @ r
    return BoundaryForms(a_forms=a_forms, g_forms=g_forms)
