"""Assembly of the chain-valued 2-form Ω and its evaluation on tangents"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from ..expr import evaluate, mixed_partial
from ..graph import vertex_pairs
from ..lagrangian import term_derivatives
from ..models import (
    Chain1,
    ChainValued2Form,
    Edge,
    FieldConfig,
    LagrangianSystem,
    NotNormalized,
    SingularTailCoupling,
    TailForm,
    TangentField,
    TreeLikeSystem,
    TreeLikeTerm,
    Variable,
)
from ..variational import hessian

logger = logging.getLogger(__name__)

Blocks = Dict[Edge, Dict[Tuple[str, str], np.ndarray]]


def vertex_blocks(t: TreeLikeTerm, sys: LagrangianSystem, config: FieldConfig) -> Dict[Tuple[str, str], np.ndarray]:
    """Nonzero mixed blocks H_jk = ∂²Λ/∂x_j∂x_k for canonical pairs j < k of α′"""
    derivatives = term_derivatives(t.term)
    local = derivatives.hessian(config)
    positions: Dict[str, list] = {}
    for a, var in enumerate(derivatives.variables):
        positions.setdefault(var.vertex, []).append((a, var.index))
    blocks = {}
    for j, k in vertex_pairs(sys.graph, t.vertices):
        if j not in positions or k not in positions:
            continue
        block = np.zeros((sys.fibers[j].dimension, sys.fibers[k].dimension))
        for a, i in positions[j]:
            for b, l in positions[k]:
                block[i, l] = local[a, b]
        if np.any(block):
            blocks[(j, k)] = block
    return blocks


def _add_term(blocks: Blocks, t: TreeLikeTerm, sys: LagrangianSystem, config: FieldConfig) -> None:
    for (j, k), block in vertex_blocks(t, sys, config).items():
        for edge, sign in t.paths[(j, k)].core.items():
            per_edge = blocks.setdefault(edge, {})
            if (j, k) not in per_edge:
                per_edge[(j, k)] = np.zeros_like(block)
            per_edge[(j, k)] = per_edge[(j, k)] + sign * block


def _tail_derivatives(template, attach_value: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """C = ∂²Λ/∂in∂out and D = ∂²Λ/∂in² at in = out = attach value"""
    m = len(attach_value)
    binding = {}
    for i in range(m):
        binding[Variable("in", i)] = float(attach_value[i])
        binding[Variable("out", i)] = float(attach_value[i])
    coupling = np.zeros((m, m))
    diagonal = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            coupling[i, j] = evaluate(mixed_partial(template, Variable("in", i), Variable("out", j)), binding)
            diagonal[i, j] = evaluate(mixed_partial(template, Variable("in", i), Variable("in", j)), binding)
    return coupling, diagonal


def tail_extension(sys: LagrangianSystem, config: FieldConfig) -> Dict[str, TailForm]:
    """Constant tail blocks of Ω for every tail with a coupling template

    The tangent on the first tail site is w = K u, chosen so that the
    tail-extended linearized equation holds at the attach vertex:
    (L u)_P + Σ_t D_t u_P + Σ_t C_t w = 0.

    Raises:
        SingularTailCoupling: if Σ_t C_t is not invertible at an attach vertex
    """
    if not sys.tail_couplings:
        return {}
    layout = sys.layout
    rows = hessian(sys, config).dense()
    forms = {}
    for vertex in sys.coupled_attach_vertices():
        tails = [t.name for t in sys.graph.tails_at(vertex) if t.name in sys.tail_couplings]
        derivs = {name: _tail_derivatives(sys.tail_couplings[name], config[vertex]) for name in tails}
        total_c = sum(c for c, _ in derivs.values())
        total_d = sum(d for _, d in derivs.values())
        selector = layout.selector(vertex)
        rhs = rows[layout.slice(vertex), :] + total_d @ selector
        try:
            if np.linalg.cond(total_c) > 1e12:
                raise np.linalg.LinAlgError("ill-conditioned")
            extension = -np.linalg.solve(total_c, rhs)
        except np.linalg.LinAlgError:
            raise SingularTailCoupling(
                f"Tail coupling at {vertex!r} has a singular in/out block; the tail tangent is undetermined"
            ) from None
        for name in tails:
            forms[name] = TailForm(tail=name, attach=vertex, coupling=derivs[name][0], extension=extension)
    return forms


def assemble_omega(tsys: TreeLikeSystem, config: FieldConfig, term: Optional[str] = None) -> ChainValued2Form:
    """Assemble Ω = Σ_α Ω^α (or a single Ω^α) at a configuration

    Each unordered pair j < k of α′ adds σ_e(l_jk) · H_jk to every edge of its path.

    Args:
        tsys: Normalized system
        config: Configuration ψ
        term: Restrict to the term with this name; tail blocks are then omitted

    Raises:
        NotNormalized: if tsys is not a TreeLikeSystem
        DomainError: if a second derivative cannot be evaluated
    """
    if not isinstance(tsys, TreeLikeSystem):
        raise NotNormalized("assemble_omega needs a normalized (tree-like) system")
    sys = tsys.system
    sys.check_config(config)
    selected = [t for t in tsys.terms if term is None or t.term.name == term]
    if term is not None and not selected:
        raise KeyError(f"No term named {term!r}")

    blocks: Blocks = {}
    for t in selected:
        _add_term(blocks, t, sys, config)
    tail_forms = tail_extension(sys, config) if term is None else {}
    logger.debug(f"Assembled Ω on {len(blocks)} edges and {len(tail_forms)} tails")
    return ChainValued2Form(tree_system=tsys, config=config, edge_blocks=blocks, tail_forms=tail_forms)


def pair_value(block: np.ndarray, u_j: np.ndarray, u_k: np.ndarray, v_j: np.ndarray, v_k: np.ndarray) -> float:
    """u_jᵀ H v_k - v_jᵀ H u_k"""
    return float(u_j @ block @ v_k - v_j @ block @ u_k)


def omega_on_tangents(form: ChainValued2Form, u: TangentField, v: TangentField) -> Chain1:
    """The 1-chain e ↦ B_e(u, v), tail constants included"""
    core = {}
    for edge in form.support:
        total = 0.0
        for (j, k), block in form.edge_blocks[edge].items():
            total += pair_value(block, u[j], u[k], v[j], v[k])
        core[edge] = total
    tails = {}
    if form.tail_forms:
        layout = form.layout
        flat_u, flat_v = layout.flatten(u), layout.flatten(v)
        for name in form.tail_forms:
            tails[name] = float(flat_u @ form.tail_matrix(name) @ flat_v)
    return Chain1(core, tails)
