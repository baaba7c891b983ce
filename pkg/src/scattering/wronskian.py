"""Symplectic Wronskian of tangent fields"""

import numpy as np

from ..models import (
    Chain1,
    Edge,
    FieldConfig,
    InvalidGraph,
    NotNearestNeighbor,
    TangentField,
    TreeLikeSystem,
)
from ..symform import assemble_omega, omega_on_tangents, pair_value, vertex_blocks


def wronskian(tsys: TreeLikeSystem, psi: FieldConfig, u: TangentField, v: TangentField) -> Chain1:
    """W(u, v) = Ω_ψ(u, v) as a 1-chain; antisymmetric in (u, v)"""
    return omega_on_tangents(assemble_omega(tsys, psi), u, v)


def require_nearest_neighbor(tsys: TreeLikeSystem) -> None:
    """Raise NotNearestNeighbor unless every term is an edge or a single vertex"""
    graph = tsys.system.graph
    for t in tsys.terms:
        alpha = t.term.vertices
        if len(alpha) == 1:
            continue
        if len(alpha) == 2:
            try:
                graph.signed_edge(alpha[0], alpha[1])
                continue
            except InvalidGraph:
                pass
        raise NotNearestNeighbor(
            f"Term {t.term.name!r} on {', '.join(alpha)} is neither an edge nor a single vertex"
        )


def nn_wronskian(tsys: TreeLikeSystem, psi: FieldConfig, u: TangentField, v: TangentField, e: Edge) -> float:
    """u_jᵀ H_jk v_k - v_jᵀ H_jk u_k for the edge e = (j, k) of a nearest-neighbour system

    The value is the Ω coefficient of e as oriented; passing (k, j) for a
    stored edge (j, k) flips the sign.

    Raises:
        NotNearestNeighbor: if some term is not nearest-neighbour
    """
    require_nearest_neighbor(tsys)
    sys = tsys.system
    graph = sys.graph
    p, q = tuple(e)
    edge, orientation = graph.signed_edge(p, q)
    # accumulate in the canonical pair orientation, as Ω stores it
    j, k = sorted(edge, key=graph.vertex_index.__getitem__)
    sign = 1.0 if edge == (j, k) else -1.0
    block = None
    for t in tsys.terms:
        if set(t.term.vertices) != {j, k}:
            continue
        term_block = vertex_blocks(t, sys, psi).get((j, k))
        if term_block is None:
            continue
        if block is None:
            block = np.zeros_like(term_block)
        block = block + sign * term_block
    if block is None:
        return 0.0
    value = pair_value(block, u[j], u[k], v[j], v[k])
    return value if orientation > 0 else -value
